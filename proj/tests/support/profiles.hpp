#pragma once

#include <map>
#include <string>
#include <vector>

#include "tidyplan/eval.hpp"
#include "tidyplan/priors.hpp"
#include "tidyplan/scene.hpp"

namespace tidyplan::testing {

// One study participant profile: a scene whose geometry admits a controlled
// set of placements, a bundle engineered so that the intended receptacle
// column is the unique reward optimum, and the published predicted and
// ground-truth assignments for that participant.
struct Profile {
  std::string name;
  SceneDescription scene;
  PriorBundle bundle;
  std::map<std::string, std::string> predicted;
  Arrangement predicted_arrangement;
  GroundTruth gt;
  double expected_accuracy = 0.0;
};

// The four representative participants: two living-room layouts and two
// kitchen preference profiles sharing one kitchen scene.
const std::vector<Profile>& representative_profiles();

// Geometric realization of a receptacle column: objects assigned to the same
// receptacle take its slots [0], [0,1] or [0,2] (whichever adjacent pair is
// closer) or [0,1,2], in object-id order. Groups larger than three are not
// supported.
Arrangement realize_column(const SceneDescription& scene,
                           const std::map<std::string, std::string>& column);

}  // namespace tidyplan::testing
