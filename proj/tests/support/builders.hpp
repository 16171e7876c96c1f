#pragma once

#include <random>
#include <string>

#include "tidyplan/priors.hpp"
#include "tidyplan/scene.hpp"

namespace tidyplan::testing {

ObjectSpec make_object(std::string id, double width, double depth, double height,
                       double usage, std::string name = "");

ReceptacleSpec make_receptacle(std::string id, double x, double y, double z, double w,
                               double d, double accessibility, int grid_resolution,
                               std::string name = "");

// Two single-slot receptacles "a" (at the origin) and "b" (2 m away) plus
// objects o1..oN that fit both. Used all over the unit tests.
SceneDescription two_slot_scene(int object_count = 1);

// Full-coverage bundle that is maximally indifferent: every prior at the
// first slot of receptacle "a" unless stated otherwise, all affinities 0,
// all commonsense scores 1, uniform weights.
PriorBundle neutral_bundle(const SceneDescription& scene);

struct RandomInstance {
  SceneDescription scene;
  PriorBundle bundle;
};

// M in 2..3 single-slot receptacles, N in 1..M objects that fit everywhere,
// random usage, accessibility, priors, affinities, commonsense and weights.
RandomInstance random_small_instance(std::mt19937_64& rng);

// Grows a complete arrangement by uniform-random admissible actions. Returns
// false when the growth dead-ends.
bool random_complete_arrangement(const SceneDescription& scene, std::mt19937_64& rng,
                                 Arrangement* out);

}  // namespace tidyplan::testing
