#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "tidyplan/scene.hpp"

namespace tidyplan {

// Mixing weights over the four preference constructs. Components must lie in
// [0, 1] and sum to 1 within kWeightSumTolerance.
struct PreferenceWeights {
  double spatial = 0.25;
  double habitual = 0.25;
  double semantic = 0.25;
  double commonsense = 0.25;

  static constexpr double kWeightSumTolerance = 1e-9;

  void validate() const;
  // Scales non-negative raw values so they sum to 1.
  static PreferenceWeights normalized(double spatial, double habitual, double semantic,
                                      double commonsense);
};

// Preferred resting position per object, estimated from demonstrations.
class SpatialPriors {
 public:
  void set(const std::string& object_id, const Vec3& position);
  const Vec3* find(const std::string& object_id) const;
  const std::map<std::string, Vec3>& entries() const { return preferred_; }

 private:
  std::map<std::string, Vec3> preferred_;
};

// Pairwise co-placement affinity in [-1, 1], symmetric, zero on the diagonal.
class SemanticAffinities {
 public:
  void set(const std::string& a, const std::string& b, double sigma);
  // Diagonal lookups return 0; unknown pairs return nullopt.
  std::optional<double> get(const std::string& a, const std::string& b) const;
  const std::map<std::pair<std::string, std::string>, double>& entries() const {
    return sigma_;
  }

 private:
  std::map<std::pair<std::string, std::string>, double> sigma_;
};

// Static commonsense plausibility per (object, receptacle) pair in [0, 1].
class CommonsensePriorTable {
 public:
  void set(const std::string& object_id, const std::string& receptacle_id, double score);
  std::optional<double> get(const std::string& object_id,
                            const std::string& receptacle_id) const;
  const std::map<std::pair<std::string, std::string>, double>& entries() const {
    return scores_;
  }

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string provenance) { provenance_ = std::move(provenance); }

  // Requires an entry for every (object, receptacle) pair of the scene.
  void validate_coverage(const SceneDescription& scene) const;

 private:
  std::map<std::pair<std::string, std::string>, double> scores_;
  std::string provenance_ = "unspecified";
};

struct ConstructScores {
  double spatial = 1.0;
  double habitual = 1.0;
  double semantic = 1.0;
  double commonsense = 1.0;
};

// All scores are over placed objects only and equal 1 on an empty arrangement.
// Distances are normalized by the scene bounding-box diagonal.

// Mean of 1 / (1 + |v - v*| / diag) over placed objects.
double spatial_score(const SceneDescription& scene, const Arrangement& x,
                     const SpatialPriors& priors);

// 1 - mean squared gap between normalized usage frequency and the
// accessibility of the receptacle each object rests on. u_max ranges over all
// scene objects and must be positive.
double habitual_score(const SceneDescription& scene, const Arrangement& x);

// 1 - mean pairwise placement penalty: positive affinities are penalized by
// distance, negative ones by proximity. 1 when fewer than two objects placed.
double semantic_score(const SceneDescription& scene, const Arrangement& x,
                      const SemanticAffinities& affinities);

// Mean commonsense table score of the placed (object, receptacle) pairs.
double commonsense_score(const SceneDescription& scene, const Arrangement& x,
                         const CommonsensePriorTable& table);

struct RewardResult {
  ConstructScores scores;
  double total = 1.0;
};

double aggregate_reward(const ConstructScores& scores, const PreferenceWeights& weights);

RewardResult reward(const SceneDescription& scene, const Arrangement& x,
                    const SpatialPriors& priors, const SemanticAffinities& affinities,
                    const CommonsensePriorTable& table, const PreferenceWeights& weights);

}  // namespace tidyplan
