#include "tidyplan/priors.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tidyplan/error.hpp"

namespace tidyplan {

DemonstrationSet DemonstrationSet::validated(const SceneDescription& scene,
                                             std::vector<Arrangement> arrangements) {
  if (arrangements.empty())
    fail(ErrorCode::precondition, "demonstration set must not be empty");
  for (std::size_t i = 0; i < arrangements.size(); ++i) {
    const auto& x = arrangements[i];
    const Validity verdict = validate_arrangement(scene, x);  // checks scene_ref too
    if (!verdict.ok)
      fail(ErrorCode::validation, "demonstration " + std::to_string(i) +
                                      " is infeasible: " + verdict.violations.front().message);
    if (x.size() != scene.objects().size())
      fail(ErrorCode::completeness,
           "demonstration " + std::to_string(i) + " does not place every object");
  }
  return DemonstrationSet{scene.id(), std::move(arrangements)};
}

void PriorBundle::validate_against(const SceneDescription& scene) const {
  weights.validate();
  for (const auto& o : scene.objects()) {
    if (spatial.find(o.id) == nullptr)
      fail(ErrorCode::coverage, "prior bundle has no spatial prior for '" + o.id + "'");
  }
  for (const auto& a : scene.objects()) {
    for (const auto& b : scene.objects()) {
      if (a.id >= b.id) continue;
      if (!affinities.get(a.id, b.id).has_value())
        fail(ErrorCode::coverage,
             "prior bundle has no affinity for pair ('" + a.id + "','" + b.id + "')");
    }
  }
  commonsense.validate_coverage(scene);
  for (const auto& [rec_id, alpha] : accessibility) {
    if (scene.find_receptacle(rec_id) == nullptr)
      fail(ErrorCode::reference,
           "prior bundle accessibility names unknown receptacle '" + rec_id + "'");
    if (!(alpha >= 0.0 && alpha <= 1.0))
      fail(ErrorCode::validation,
           "prior bundle accessibility for '" + rec_id + "' out of [0,1]");
  }
}

SpatialPriors estimate_spatial_priors(const SceneDescription& scene,
                                      const DemonstrationSet& demos) {
  if (demos.arrangements.empty())
    fail(ErrorCode::precondition, "demonstration set must not be empty");

  SpatialPriors priors;
  for (const auto& obj : scene.objects()) {
    // Count placements per receptacle and keep every position for the winner.
    std::map<std::string, std::vector<Vec3>> by_receptacle;
    for (const auto& demo : demos.arrangements) {
      const Placement* p = demo.find(obj.id);
      if (p != nullptr) by_receptacle[p->receptacle_id].push_back(p->position);
    }
    if (by_receptacle.empty())
      fail(ErrorCode::coverage,
           "object '" + obj.id + "' does not appear in any demonstration");

    const std::string* modal = nullptr;
    std::size_t modal_count = 0;
    for (const auto& [rec_id, positions] : by_receptacle) {
      // std::map iterates ids in lexicographic order, so ties keep the
      // smallest id seen first.
      if (positions.size() > modal_count) {
        modal = &rec_id;
        modal_count = positions.size();
      }
    }

    Vec3 centroid;
    for (const Vec3& v : by_receptacle[*modal]) centroid = centroid + v;
    const double k = static_cast<double>(modal_count);
    priors.set(obj.id, {centroid.x / k, centroid.y / k, centroid.z / k});
  }
  return priors;
}

SemanticAffinities estimate_affinities(const DemonstrationSet& demos, int num_receptacles) {
  if (demos.arrangements.empty())
    fail(ErrorCode::precondition, "demonstration set must not be empty");
  if (num_receptacles < 2)
    fail(ErrorCode::precondition, "affinity estimation requires at least 2 receptacles");

  std::set<std::string> ids;
  for (const auto& demo : demos.arrangements) {
    for (const auto& p : demo.placements) ids.insert(p.object_id);
  }

  const double p0 = 1.0 / static_cast<double>(num_receptacles);
  const double total = static_cast<double>(demos.arrangements.size());

  SemanticAffinities affinities;
  for (auto ia = ids.begin(); ia != ids.end(); ++ia) {
    for (auto ib = std::next(ia); ib != ids.end(); ++ib) {
      std::size_t together = 0;
      for (const auto& demo : demos.arrangements) {
        const Placement* pa = demo.find(*ia);
        const Placement* pb = demo.find(*ib);
        if (pa != nullptr && pb != nullptr && pa->receptacle_id == pb->receptacle_id)
          ++together;
      }
      const double c = static_cast<double>(together) / total;
      double sigma = c >= p0 ? (c - p0) / (1.0 - p0) : (c - p0) / p0;
      sigma = std::clamp(sigma, -1.0, 1.0);
      affinities.set(*ia, *ib, sigma);
    }
  }
  return affinities;
}

std::vector<std::pair<std::string, double>> estimate_accessibility(
    const SceneDescription& scene, const DemonstrationSet& demos) {
  if (demos.arrangements.empty())
    fail(ErrorCode::precondition, "demonstration set must not be empty");
  double u_max = 0.0;
  for (const auto& o : scene.objects()) u_max = std::max(u_max, o.usage_frequency);
  if (!(u_max > 0.0))
    fail(ErrorCode::degenerate_usage,
         "all usage frequencies are zero in scene '" + scene.id() + "'");

  // Distinct objects ever placed on each receptacle across the whole set.
  std::map<std::string, std::set<std::string>> users;
  for (const auto& demo : demos.arrangements) {
    for (const auto& p : demo.placements) users[p.receptacle_id].insert(p.object_id);
  }

  std::vector<std::pair<std::string, double>> result;
  result.reserve(scene.receptacles().size());
  for (const auto& rec : scene.receptacles()) {
    const auto it = users.find(rec.id);
    if (it == users.end() || it->second.empty()) {
      result.emplace_back(rec.id, 0.0);
      continue;
    }
    double sum = 0.0;
    for (const auto& obj_id : it->second) {
      const ObjectSpec* obj = scene.find_object(obj_id);
      if (obj == nullptr)
        fail(ErrorCode::reference,
             "demonstration places unknown object '" + obj_id + "'");
      sum += obj->usage_frequency / u_max;
    }
    result.emplace_back(rec.id, sum / static_cast<double>(it->second.size()));
  }
  return result;
}

PreferenceWeights weights_from_likert(const LikertResponse& response) {
  for (int item : response.items) {
    if (item < 1 || item > 5)
      fail(ErrorCode::validation, "likert items must be integers in 1..5");
  }
  std::array<double, 4> means{};
  for (std::size_t construct = 0; construct < 4; ++construct) {
    double sum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) sum += response.items[construct * 3 + k];
    means[construct] = sum / 3.0;
  }
  return PreferenceWeights::normalized(means[0], means[1], means[2], means[3]);
}

}  // namespace tidyplan
