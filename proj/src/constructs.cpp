#include "tidyplan/constructs.hpp"

#include <algorithm>
#include <cmath>

#include "tidyplan/error.hpp"

namespace tidyplan {

namespace {

std::pair<std::string, std::string> ordered_pair(const std::string& a, const std::string& b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

void PreferenceWeights::validate() const {
  const double components[] = {spatial, habitual, semantic, commonsense};
  double sum = 0.0;
  for (double w : components) {
    if (!(w >= 0.0 && w <= 1.0))
      fail(ErrorCode::validation, "preference weight out of [0,1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance)
    fail(ErrorCode::validation, "preference weights must sum to 1");
}

PreferenceWeights PreferenceWeights::normalized(double spatial, double habitual,
                                                double semantic, double commonsense) {
  const double sum = spatial + habitual + semantic + commonsense;
  if (!(sum > 0.0) || spatial < 0.0 || habitual < 0.0 || semantic < 0.0 || commonsense < 0.0)
    fail(ErrorCode::validation, "raw weights must be non-negative with a positive sum");
  PreferenceWeights w{spatial / sum, habitual / sum, semantic / sum, commonsense / sum};
  return w;
}

void SpatialPriors::set(const std::string& object_id, const Vec3& position) {
  if (!is_finite(position))
    fail(ErrorCode::validation, "spatial prior for '" + object_id + "' must be finite");
  preferred_[object_id] = position;
}

const Vec3* SpatialPriors::find(const std::string& object_id) const {
  auto it = preferred_.find(object_id);
  return it == preferred_.end() ? nullptr : &it->second;
}

void SemanticAffinities::set(const std::string& a, const std::string& b, double sigma) {
  if (a == b) {
    if (sigma != 0.0)
      fail(ErrorCode::validation, "affinity of '" + a + "' with itself must be 0");
    return;
  }
  if (!(sigma >= -1.0 && sigma <= 1.0))
    fail(ErrorCode::validation, "affinity of ('" + a + "','" + b + "') out of [-1,1]");
  sigma_[ordered_pair(a, b)] = sigma;
}

std::optional<double> SemanticAffinities::get(const std::string& a,
                                              const std::string& b) const {
  if (a == b) return 0.0;
  auto it = sigma_.find(ordered_pair(a, b));
  if (it == sigma_.end()) return std::nullopt;
  return it->second;
}

void CommonsensePriorTable::set(const std::string& object_id,
                                const std::string& receptacle_id, double score) {
  if (!(score >= 0.0 && score <= 1.0))
    fail(ErrorCode::validation, "commonsense score for ('" + object_id + "','" +
                                    receptacle_id + "') out of [0,1]");
  scores_[{object_id, receptacle_id}] = score;
}

std::optional<double> CommonsensePriorTable::get(const std::string& object_id,
                                                 const std::string& receptacle_id) const {
  auto it = scores_.find({object_id, receptacle_id});
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

void CommonsensePriorTable::validate_coverage(const SceneDescription& scene) const {
  for (const auto& o : scene.objects()) {
    for (const auto& r : scene.receptacles()) {
      if (!scores_.count({o.id, r.id}))
        fail(ErrorCode::coverage,
             "commonsense table missing entry for ('" + o.id + "','" + r.id + "')");
    }
  }
}

double spatial_score(const SceneDescription& scene, const Arrangement& x,
                     const SpatialPriors& priors) {
  if (x.empty()) return 1.0;
  const double diag = scene.diagonal();
  double sum = 0.0;
  for (const auto& p : x.placements) {
    const Vec3* preferred = priors.find(p.object_id);
    if (preferred == nullptr)
      fail(ErrorCode::coverage, "no spatial prior for object '" + p.object_id + "'");
    const double d = distance(p.position, *preferred) / diag;
    sum += 1.0 / (1.0 + d);
  }
  return sum / static_cast<double>(x.size());
}

double habitual_score(const SceneDescription& scene, const Arrangement& x) {
  // A scene with no objects at all has nothing to score; the degenerate-usage
  // check applies only when objects exist.
  if (scene.objects().empty()) return 1.0;
  double u_max = 0.0;
  for (const auto& o : scene.objects()) u_max = std::max(u_max, o.usage_frequency);
  if (!(u_max > 0.0))
    fail(ErrorCode::degenerate_usage,
         "all usage frequencies are zero in scene '" + scene.id() + "'");
  if (x.empty()) return 1.0;

  double sum = 0.0;
  for (const auto& p : x.placements) {
    const ObjectSpec* obj = scene.find_object(p.object_id);
    if (obj == nullptr)
      fail(ErrorCode::reference, "habitual_score: unknown object '" + p.object_id + "'");
    const ReceptacleSpec* rec = scene.find_receptacle(p.receptacle_id);
    if (rec == nullptr)
      fail(ErrorCode::reference,
           "habitual_score: unknown receptacle '" + p.receptacle_id + "'");
    const double gap = obj->usage_frequency / u_max - rec->accessibility;
    sum += gap * gap;
  }
  return 1.0 - sum / static_cast<double>(x.size());
}

double semantic_score(const SceneDescription& scene, const Arrangement& x,
                      const SemanticAffinities& affinities) {
  const std::size_t n = x.size();
  if (n < 2) return 1.0;
  const double diag = scene.diagonal();

  double penalty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = x.placements[i];
      const auto& b = x.placements[j];
      const auto sigma = affinities.get(a.object_id, b.object_id);
      if (!sigma.has_value())
        fail(ErrorCode::coverage, "no affinity entry for pair ('" + a.object_id + "','" +
                                      b.object_id + "')");
      if (*sigma == 0.0) continue;
      const double d = distance(a.position, b.position) / diag;
      const double proximity = d / (1.0 + d);
      // Ordered pairs (i,j) and (j,i) contribute identically, hence factor 2.
      if (*sigma > 0.0) {
        penalty += 2.0 * (*sigma) * proximity;
      } else {
        penalty += 2.0 * (-*sigma) * (1.0 - proximity);
      }
    }
  }
  return 1.0 - penalty / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double commonsense_score(const SceneDescription& scene, const Arrangement& x,
                         const CommonsensePriorTable& table) {
  (void)scene;
  if (x.empty()) return 1.0;
  double sum = 0.0;
  for (const auto& p : x.placements) {
    const auto score = table.get(p.object_id, p.receptacle_id);
    if (!score.has_value())
      fail(ErrorCode::coverage, "commonsense table missing entry for ('" + p.object_id +
                                    "','" + p.receptacle_id + "')");
    sum += *score;
  }
  return sum / static_cast<double>(x.size());
}

double aggregate_reward(const ConstructScores& scores, const PreferenceWeights& weights) {
  const double total = weights.spatial * scores.spatial + weights.habitual * scores.habitual +
                       weights.semantic * scores.semantic +
                       weights.commonsense * scores.commonsense;
  // The exact value lies in [0,1]; summation rounding can step one ulp past.
  return std::clamp(total, 0.0, 1.0);
}

RewardResult reward(const SceneDescription& scene, const Arrangement& x,
                    const SpatialPriors& priors, const SemanticAffinities& affinities,
                    const CommonsensePriorTable& table, const PreferenceWeights& weights) {
  weights.validate();
  RewardResult result;
  result.scores.spatial = spatial_score(scene, x, priors);
  result.scores.habitual = habitual_score(scene, x);
  result.scores.semantic = semantic_score(scene, x, affinities);
  result.scores.commonsense = commonsense_score(scene, x, table);
  result.total = aggregate_reward(result.scores, weights);
  return result;
}

}  // namespace tidyplan
