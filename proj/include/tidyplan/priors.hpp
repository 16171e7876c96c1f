#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tidyplan/constructs.hpp"
#include "tidyplan/scene.hpp"

namespace tidyplan {

// Complete, feasible example arrangements provided by one person.
struct DemonstrationSet {
  std::string scene_ref;
  std::vector<Arrangement> arrangements;

  // Rejects empty sets and any arrangement that is incomplete, infeasible or
  // bound to a different scene.
  static DemonstrationSet validated(const SceneDescription& scene,
                                    std::vector<Arrangement> arrangements);
};

// Twelve questionnaire items on a 1..5 scale, three per construct in the
// order spatial, habitual, semantic, commonsense.
struct LikertResponse {
  std::array<int, 12> items{};
  std::optional<std::string> participant_id;
};

// Everything the planner needs about one person's preferences.
struct PriorBundle {
  SpatialPriors spatial;
  SemanticAffinities affinities;
  CommonsensePriorTable commonsense;
  PreferenceWeights weights;
  // Optional per-receptacle accessibility overrides applied onto the scene.
  std::vector<std::pair<std::string, double>> accessibility;

  // Coverage checks: a spatial prior per object, an affinity per object pair
  // and a commonsense entry per (object, receptacle) pair.
  void validate_against(const SceneDescription& scene) const;
};

// Centroid of each object's placements on its most frequent receptacle;
// receptacle ties resolve to the lexicographically smallest id.
SpatialPriors estimate_spatial_priors(const SceneDescription& scene,
                                      const DemonstrationSet& demos);

// Affinity from co-placement rate c against the chance rate p0 = 1/M:
// (c - p0) / (1 - p0) when c >= p0, else (c - p0) / p0, clamped to [-1, 1].
SemanticAffinities estimate_affinities(const DemonstrationSet& demos, int num_receptacles);

// Mean normalized usage frequency of the distinct objects ever demonstrated
// on each receptacle; receptacles never used get 0.
std::vector<std::pair<std::string, double>> estimate_accessibility(
    const SceneDescription& scene, const DemonstrationSet& demos);

// Per-construct item means, normalized across constructs to sum to 1.
PreferenceWeights weights_from_likert(const LikertResponse& response);

}  // namespace tidyplan
