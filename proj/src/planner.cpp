#include "tidyplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tidyplan/error.hpp"

namespace tidyplan {

namespace {

RewardResult evaluate(const SceneDescription& scene, const Arrangement& x,
                      const PriorBundle& bundle) {
  return reward(scene, x, bundle.spatial, bundle.affinities, bundle.commonsense,
                bundle.weights);
}

void expand(const SceneDescription& scene, SearchNode& node) {
  if (node.expanded) return;
  const auto actions = admissible_actions(scene, node.state);
  node.edges.reserve(actions.size());
  for (const auto& a : actions) node.edges.push_back({a, nullptr, 0, 0.0});
  node.expanded = true;
}

std::unique_ptr<SearchNode> search_tree(const SceneDescription& scene,
                                        const PriorBundle& bundle, int iterations,
                                        double exploration_c, std::uint64_t seed,
                                        int* flagged_rollouts) {
  auto root = std::make_unique<SearchNode>();
  root->state.scene_ref = scene.id();
  std::mt19937_64 rng(seed);

  std::vector<SearchNode*> path;
  std::vector<SearchNode::Edge*> taken;
  for (int it = 0; it < iterations; ++it) {
    path.assign(1, root.get());
    taken.clear();

    SearchNode* node = root.get();
    for (;;) {
      expand(scene, *node);
      if (node->edges.empty()) break;  // complete or dead end
      SearchNode::Edge& edge = node->edges[select_ucb(*node, exploration_c)];
      if (edge.child == nullptr) {
        edge.child = std::make_unique<SearchNode>();
        edge.child->state = apply_action(node->state, edge.action);
        node = edge.child.get();
        path.push_back(node);
        taken.push_back(&edge);
        break;  // one new child per iteration, then roll out
      }
      node = edge.child.get();
      path.push_back(node);
      taken.push_back(&edge);
    }

    bool dead = false;
    const double value = rollout(scene, node->state, bundle, rng, &dead);
    if (dead && flagged_rollouts != nullptr) ++*flagged_rollouts;

    for (SearchNode* n : path) n->visit_count += 1;
    for (SearchNode::Edge* e : taken) {
      e->visits += 1;
      e->total_reward += value;
    }
  }
  return root;
}

}  // namespace

void PlannerConfig::validate() const {
  if (iterations < 1) fail(ErrorCode::precondition, "iterations must be >= 1");
  if (!(exploration_c > 0.0)) fail(ErrorCode::precondition, "exploration_c must be > 0");
  if (trees < 1) fail(ErrorCode::precondition, "trees must be >= 1");
}

std::size_t select_ucb(const SearchNode& node, double c) {
  if (!node.expanded || node.edges.empty())
    fail(ErrorCode::precondition, "select_ucb called on a terminal or unexpanded node");

  for (std::size_t i = 0; i < node.edges.size(); ++i) {
    if (node.edges[i].visits == 0) return i;
  }
  const double log_n =
      node.visit_count > 1 ? std::log(static_cast<double>(node.visit_count)) : 0.0;
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < node.edges.size(); ++i) {
    const auto& e = node.edges[i];
    const double q = e.total_reward / static_cast<double>(e.visits);
    const double value = q + c * std::sqrt(log_n / static_cast<double>(e.visits));
    if (value > best_value) {
      best = i;
      best_value = value;
    }
  }
  return best;
}

double rollout(const SceneDescription& scene, Arrangement state, const PriorBundle& bundle,
               std::mt19937_64& rng, bool* flagged) {
  const std::size_t total = scene.objects().size();
  if (state.size() > total)
    fail(ErrorCode::precondition, "rollout state places more objects than the scene has");
  const std::size_t remaining = total - state.size();
  if (remaining == 0) return evaluate(scene, state, bundle).total;

  double sum = 0.0;
  for (std::size_t step = 0; step < remaining; ++step) {
    const auto actions = admissible_actions(scene, state);
    if (actions.empty()) {
      if (flagged != nullptr) *flagged = true;
      break;  // unreached steps count as reward 0
    }
    std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
    state = apply_action(state, actions[pick(rng)]);
    sum += evaluate(scene, state, bundle).total;
  }
  return sum / static_cast<double>(remaining);
}

PlanResult plan(const SceneDescription& scene, const PriorBundle& bundle,
                const PlannerConfig& cfg) {
  cfg.validate();
  bundle.validate_against(scene);
  const SceneDescription eff = scene.with_accessibility(bundle.accessibility);

  int flagged = 0;
  std::vector<std::unique_ptr<SearchNode>> roots;
  roots.reserve(static_cast<std::size_t>(cfg.trees));
  for (int k = 0; k < cfg.trees; ++k) {
    roots.push_back(search_tree(eff, bundle, cfg.iterations, cfg.exploration_c,
                                cfg.seed + static_cast<std::uint64_t>(k), &flagged));
  }

  PlanResult result;
  result.final.scene_ref = eff.id();
  result.iterations_used = cfg.iterations * cfg.trees;
  result.seed = cfg.seed;
  result.flagged_rollouts = flagged;

  std::vector<const SearchNode*> cursors;
  for (const auto& r : roots) cursors.push_back(r.get());

  const std::size_t n_objects = eff.objects().size();
  for (std::size_t depth = 0; depth < n_objects; ++depth) {
    // Every tree enumerates the same state's actions in the same order, so
    // edge index i denotes the same action across cursors.
    const auto actions = admissible_actions(eff, result.final);
    if (actions.empty())
      fail(ErrorCode::validation,
           "no feasible action while extracting step " + std::to_string(depth + 1) +
               " of " + std::to_string(n_objects));

    std::size_t best = actions.size();
    double best_q = 0.0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      long long visits = 0;
      double total = 0.0;
      for (const SearchNode* cur : cursors) {
        if (cur == nullptr || !cur->expanded || i >= cur->edges.size()) continue;
        visits += cur->edges[i].visits;
        total += cur->edges[i].total_reward;
      }
      if (visits == 0) continue;
      const double q = total / static_cast<double>(visits);
      if (best == actions.size() || q > best_q) {
        best = i;
        best_q = q;
      }
    }
    // Levels the search never reached fall back to the first action.
    if (best == actions.size()) best = 0;

    result.trajectory.push_back(actions[best]);
    result.final = apply_action(result.final, actions[best]);
    result.reward_trace.push_back(evaluate(eff, result.final, bundle));

    for (auto& cur : cursors) {
      cur = (cur != nullptr && cur->expanded && best < cur->edges.size())
                ? cur->edges[best].child.get()
                : nullptr;
    }
  }
  return result;
}

std::pair<Arrangement, double> solve_exact(const SceneDescription& scene,
                                           const PriorBundle& bundle) {
  bundle.validate_against(scene);
  const SceneDescription eff = scene.with_accessibility(bundle.accessibility);

  std::vector<const ObjectSpec*> objects;
  for (const auto& o : eff.objects()) objects.push_back(&o);
  std::sort(objects.begin(), objects.end(),
            [](const ObjectSpec* a, const ObjectSpec* b) { return a->id < b->id; });

  std::vector<const ReceptacleSpec*> receptacles;
  for (const auto& r : eff.receptacles()) receptacles.push_back(&r);
  std::sort(receptacles.begin(), receptacles.end(),
            [](const ReceptacleSpec* a, const ReceptacleSpec* b) { return a->id < b->id; });

  struct Option {
    const ReceptacleSpec* rec;
    int slot;
    Vec3 position;
  };
  // Containment does not depend on occupancy, so the surface check runs once
  // per object; only collisions are re-tested during the descent.
  std::vector<std::vector<Option>> options(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (const ReceptacleSpec* rec : receptacles) {
      const auto slots = candidate_slots(eff, rec->id);
      for (std::size_t s = 0; s < slots.size(); ++s) {
        Arrangement empty;
        empty.scene_ref = eff.id();
        if (placement_fits(eff, empty, objects[i]->id, rec->id, slots[s]))
          options[i].push_back({rec, static_cast<int>(s), slots[s]});
      }
    }
  }

  constexpr long long kNodeLimit = 50'000'000;
  long long leaves = 0;
  long long nodes = 0;

  Arrangement current;
  current.scene_ref = eff.id();
  Arrangement best_arrangement;
  double best_reward = 0.0;
  bool found = false;

  auto dfs = [&](auto&& self, std::size_t depth) -> void {
    if (++nodes > kNodeLimit)
      fail(ErrorCode::capacity, "exact solve exceeded the search node limit");
    if (depth == objects.size()) {
      if (++leaves > kExactLeafLimit)
        fail(ErrorCode::capacity,
             "exact solve exceeded " + std::to_string(kExactLeafLimit) + " leaf states");
      const double r = evaluate(eff, current, bundle).total;
      // Strict improvement keeps the first maximum, which is the
      // lexicographically smallest assignment in enumeration order.
      if (!found || r > best_reward) {
        best_arrangement = current;
        best_reward = r;
        found = true;
      }
      return;
    }
    const ObjectSpec* obj = objects[depth];
    for (const Option& opt : options[depth]) {
      if (!placement_fits(eff, current, obj->id, opt.rec->id, opt.position)) continue;
      current.placements.push_back({obj->id, opt.rec->id, opt.position});
      self(self, depth + 1);
      current.placements.pop_back();
    }
  };
  dfs(dfs, 0);

  if (!found)
    fail(ErrorCode::validation,
         "scene '" + eff.id() + "' admits no feasible complete arrangement");
  return {best_arrangement, best_reward};
}

}  // namespace tidyplan
