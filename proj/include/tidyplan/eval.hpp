#pragma once

#include <map>
#include <string>
#include <vector>

#include "tidyplan/scene.hpp"

namespace tidyplan {

// Receptacle-level reference assignment. Positions are deliberately absent;
// accuracy is insensitive to where on a receptacle an object sits.
struct GroundTruth {
  std::string scene_ref;
  std::map<std::string, std::string> assignment;  // object_id -> receptacle_id
};

struct ObjectOutcome {
  std::string object_id;
  std::string predicted_receptacle;
  std::string gt_receptacle;
  bool match = false;
};

struct EvalReport {
  double object_accuracy = 0.0;
  std::vector<ObjectOutcome> per_object;  // ordered by object id
  double jaccard = 0.0;
};

// Fraction of objects the prediction puts in the ground-truth receptacle.
// The prediction must place every object in gt's assignment, and both must
// reference the same scene.
EvalReport object_accuracy(const Arrangement& pred, const GroundTruth& gt);

struct BatchSummary {
  double mean = 0.0;
  double stdev = 0.0;  // population form; the case list is the whole population
  std::vector<EvalReport> cases;
};

BatchSummary batch_eval(const std::vector<std::pair<Arrangement, GroundTruth>>& cases);

}  // namespace tidyplan
