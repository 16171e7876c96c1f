#include "tidyplan/eval.hpp"

#include <algorithm>
#include <cmath>

#include "tidyplan/error.hpp"

namespace tidyplan {

EvalReport object_accuracy(const Arrangement& pred, const GroundTruth& gt) {
  if (pred.scene_ref != gt.scene_ref)
    fail(ErrorCode::comparison, "prediction references scene '" + pred.scene_ref +
                                    "' but ground truth references '" + gt.scene_ref + "'");
  if (gt.assignment.empty())
    fail(ErrorCode::precondition, "ground truth assignment is empty");

  EvalReport report;
  std::size_t matches = 0;
  // std::map iteration gives object-id order.
  for (const auto& [object_id, gt_receptacle] : gt.assignment) {
    const Placement* p = pred.find(object_id);
    if (p == nullptr)
      fail(ErrorCode::completeness,
           "prediction does not place object '" + object_id + "'");
    const bool match = p->receptacle_id == gt_receptacle;
    if (match) ++matches;
    report.per_object.push_back({object_id, p->receptacle_id, gt_receptacle, match});
  }
  report.object_accuracy =
      static_cast<double>(matches) / static_cast<double>(gt.assignment.size());

  Arrangement gt_as_arrangement;
  gt_as_arrangement.scene_ref = gt.scene_ref;
  for (const auto& [object_id, receptacle_id] : gt.assignment)
    gt_as_arrangement.placements.push_back({object_id, receptacle_id, Vec3{}});
  report.jaccard = jaccard_similarity(pred, gt_as_arrangement);
  return report;
}

BatchSummary batch_eval(const std::vector<std::pair<Arrangement, GroundTruth>>& cases) {
  if (cases.empty()) fail(ErrorCode::usage, "batch_eval requires at least one case");

  BatchSummary summary;
  summary.cases.reserve(cases.size());
  double sum = 0.0;
  for (const auto& [pred, gt] : cases) {
    summary.cases.push_back(object_accuracy(pred, gt));
    sum += summary.cases.back().object_accuracy;
  }
  const double n = static_cast<double>(cases.size());
  summary.mean = sum / n;

  double ss = 0.0;
  for (const auto& report : summary.cases) {
    const double gap = report.object_accuracy - summary.mean;
    ss += gap * gap;
  }
  summary.stdev = std::sqrt(ss / n);
  return summary;
}

}  // namespace tidyplan
