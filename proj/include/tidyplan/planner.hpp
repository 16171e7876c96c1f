#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "tidyplan/constructs.hpp"
#include "tidyplan/priors.hpp"
#include "tidyplan/scene.hpp"

namespace tidyplan {

struct PlannerConfig {
  int iterations = 10000;
  double exploration_c = 0.7071067811865476;  // 1/sqrt(2)
  std::uint64_t seed = 0;
  // Independent trees searched with seeds seed, seed+1, ... and merged by
  // summing edge statistics before extraction.
  int trees = 1;

  void validate() const;
};

struct SearchNode {
  struct Edge {
    PlacementAction action;
    std::unique_ptr<SearchNode> child;
    int visits = 0;
    double total_reward = 0.0;
  };

  Arrangement state;
  int visit_count = 0;
  // True once admissible actions have been enumerated into edges. A node with
  // expanded == true and no edges is terminal (complete or dead end).
  bool expanded = false;
  std::vector<Edge> edges;
};

// Index of the edge maximizing total_reward/visits + c * sqrt(ln n / visits).
// Unvisited edges win over visited ones, first in edge order; ties also go to
// the earlier edge. The node must be expanded and have at least one edge.
std::size_t select_ucb(const SearchNode& node, double c);

// Completes the arrangement with uniform-random admissible actions and returns
// the mean reward over the states reached after each action. A complete input
// is evaluated as a single term. Dead ends contribute 0 for every unreached
// step and set *flagged when provided.
double rollout(const SceneDescription& scene, Arrangement state, const PriorBundle& bundle,
               std::mt19937_64& rng, bool* flagged = nullptr);

struct PlanResult {
  std::vector<PlacementAction> trajectory;
  Arrangement final;
  std::vector<RewardResult> reward_trace;  // scores after each trajectory step
  int iterations_used = 0;
  std::uint64_t seed = 0;
  int flagged_rollouts = 0;
};

PlanResult plan(const SceneDescription& scene, const PriorBundle& bundle,
                const PlannerConfig& cfg);

// Depth-first exhaustive enumeration of complete feasible assignments.
// Refuses instances that would visit more than kExactLeafLimit leaves.
inline constexpr long long kExactLeafLimit = 10'000'000;

std::pair<Arrangement, double> solve_exact(const SceneDescription& scene,
                                           const PriorBundle& bundle);

}  // namespace tidyplan
