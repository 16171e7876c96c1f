#include <vector>

#include "doctest.h"
#include "support/builders.hpp"
#include "support/checks.hpp"
#include "tidyplan/priors.hpp"

using namespace tidyplan;
using tidyplan::testing::error_code_of;
using tidyplan::testing::make_object;
using tidyplan::testing::make_receptacle;
using tidyplan::testing::two_slot_scene;

namespace {

Arrangement demo(const SceneDescription& scene,
                 std::vector<std::tuple<std::string, std::string, Vec3>> placements) {
  Arrangement x;
  x.scene_ref = scene.id();
  for (auto& [obj, rec, pos] : placements) x.placements.push_back({obj, rec, pos});
  return x;
}

const Vec3 kSlotA{0.25, 0.25, 0.5};
const Vec3 kSlotB{2.25, 0.25, 0.5};

}  // namespace

TEST_CASE("demonstration sets are validated up front") {
  const SceneDescription scene = two_slot_scene(2);

  CHECK(error_code_of([&] { DemonstrationSet::validated(scene, {}); }) ==
        ErrorCode::precondition);

  // Incomplete demonstration.
  CHECK(error_code_of([&] {
          DemonstrationSet::validated(scene, {demo(scene, {{"o1", "a", kSlotA}})});
        }) == ErrorCode::completeness);

  // Infeasible demonstration (both objects on the same single slot).
  CHECK(error_code_of([&] {
          DemonstrationSet::validated(
              scene, {demo(scene, {{"o1", "a", kSlotA}, {"o2", "a", kSlotA}})});
        }) == ErrorCode::validation);

  // Demonstration bound to another scene.
  Arrangement foreign = demo(scene, {{"o1", "a", kSlotA}, {"o2", "b", kSlotB}});
  foreign.scene_ref = "other";
  CHECK(error_code_of([&] { DemonstrationSet::validated(scene, {foreign}); }) ==
        ErrorCode::reference);

  const DemonstrationSet demos = DemonstrationSet::validated(
      scene, {demo(scene, {{"o1", "a", kSlotA}, {"o2", "b", kSlotB}})});
  CHECK(demos.scene_ref == scene.id());
  CHECK(demos.arrangements.size() == 1);
}

TEST_CASE("single demonstration pins spatial priors to its positions") {
  const SceneDescription scene = two_slot_scene(2);
  const DemonstrationSet demos = DemonstrationSet::validated(
      scene, {demo(scene, {{"o1", "a", kSlotA}, {"o2", "b", kSlotB}})});
  const SpatialPriors priors = estimate_spatial_priors(scene, demos);
  CHECK(*priors.find("o1") == kSlotA);
  CHECK(*priors.find("o2") == kSlotB);
}

TEST_CASE("spatial priors use the modal receptacle's centroid") {
  const SceneDescription scene = two_slot_scene(1);
  const Vec3 a1{0.2, 0.2, 0.5};
  const Vec3 a2{0.3, 0.3, 0.5};
  const DemonstrationSet demos = DemonstrationSet::validated(
      scene, {demo(scene, {{"o1", "a", a1}}), demo(scene, {{"o1", "a", a2}}),
              demo(scene, {{"o1", "b", kSlotB}})});
  const SpatialPriors priors = estimate_spatial_priors(scene, demos);
  // Receptacle "a" hosts two of three placements; the prior is their centroid.
  CHECK(*priors.find("o1") == Vec3{0.25, 0.25, 0.5});
}

TEST_CASE("spatial prior receptacle ties resolve to the smaller id") {
  const SceneDescription scene = two_slot_scene(1);
  const DemonstrationSet demos = DemonstrationSet::validated(
      scene, {demo(scene, {{"o1", "b", kSlotB}}), demo(scene, {{"o1", "a", kSlotA}})});
  const SpatialPriors priors = estimate_spatial_priors(scene, demos);
  CHECK(*priors.find("o1") == kSlotA);
}

TEST_CASE("affinity estimation hits the exact anchor points") {
  const SceneDescription scene = two_slot_scene(2);
  const int m = static_cast<int>(scene.receptacles().size());
  REQUIRE(m == 2);

  // The two-slot receptacles hold one object each, so co-placement has to be
  // staged on a wider receptacle; affinity estimation only reads assignments.
  std::vector<ObjectSpec> objects = {make_object("o1", 0.1, 0.1, 0.1, 1),
                                     make_object("o2", 0.1, 0.1, 0.1, 1)};
  std::vector<ReceptacleSpec> receptacles = {
      make_receptacle("a", 0, 0, 0.5, 0.6, 0.6, 0.8, 2),
      make_receptacle("b", 2, 0, 0.5, 0.6, 0.6, 0.4, 2)};
  const SceneDescription wide("wide", std::move(objects), std::move(receptacles));
  const auto slots_a = candidate_slots(wide, "a");
  const auto slots_b = candidate_slots(wide, "b");

  auto together = demo(wide, {{"o1", "a", slots_a[0]}, {"o2", "a", slots_a[3]}});
  auto apart = demo(wide, {{"o1", "a", slots_a[0]}, {"o2", "b", slots_b[0]}});

  // Co-placement rate 1 maps to sigma = 1 exactly.
  SemanticAffinities always =
      estimate_affinities(DemonstrationSet::validated(wide, {together, together}), m);
  CHECK(always.get("o1", "o2") == 1.0);

  // Co-placement at the chance rate 1/M maps to sigma = 0 exactly.
  SemanticAffinities chance =
      estimate_affinities(DemonstrationSet::validated(wide, {together, apart}), m);
  CHECK(chance.get("o1", "o2") == 0.0);

  // Never co-placed maps to sigma = -1 exactly.
  SemanticAffinities never =
      estimate_affinities(DemonstrationSet::validated(wide, {apart, apart}), m);
  CHECK(never.get("o1", "o2") == -1.0);

  CHECK(error_code_of([&] {
          estimate_affinities(DemonstrationSet::validated(wide, {apart}), 1);
        }) == ErrorCode::precondition);
}

TEST_CASE("accessibility estimates average distinct users' normalized usage") {
  std::vector<ObjectSpec> objects = {make_object("hot", 0.2, 0.2, 0.1, 10),
                                     make_object("cold", 0.2, 0.2, 0.1, 5)};
  std::vector<ReceptacleSpec> receptacles = {
      make_receptacle("a", 0, 0, 0.5, 0.5, 0.5, 0.8, 1),
      make_receptacle("b", 2, 0, 0.5, 0.5, 0.5, 0.4, 1),
      make_receptacle("c", 4, 0, 0.5, 0.5, 0.5, 0.6, 1)};
  const SceneDescription scene("usage", std::move(objects), std::move(receptacles));
  const Vec3 slot_c{4.25, 0.25, 0.5};

  const DemonstrationSet demos = DemonstrationSet::validated(
      scene, {demo(scene, {{"hot", "a", kSlotA}, {"cold", "b", kSlotB}}),
              demo(scene, {{"hot", "a", Vec3{0.15, 0.25, 0.5}},
                           {"cold", "a", Vec3{0.35, 0.25, 0.5}}})});
  // "a" hosted {hot, cold} once each across the set, "b" hosted {cold},
  // "c" was never used. The second hot-on-a placement adds no new user.
  const auto alpha = estimate_accessibility(scene, demos);
  REQUIRE(alpha.size() == 3);
  CHECK(alpha[0].first == "a");
  CHECK(alpha[0].second == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(alpha[1].first == "b");
  CHECK(alpha[1].second == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(alpha[2].first == "c");
  CHECK(alpha[2].second == 0.0);

  // A receptacle hosting only the max-usage object reaches alpha = 1.
  const DemonstrationSet solo = DemonstrationSet::validated(
      scene, {demo(scene, {{"hot", "c", slot_c}, {"cold", "b", kSlotB}})});
  const auto alpha_solo = estimate_accessibility(scene, solo);
  CHECK(alpha_solo[2].second == 1.0);
}

TEST_CASE("accessibility estimation refuses all-zero usage") {
  std::vector<ObjectSpec> objects = {make_object("o1", 0.2, 0.2, 0.1, 0)};
  std::vector<ReceptacleSpec> receptacles = {
      make_receptacle("a", 0, 0, 0.5, 0.5, 0.5, 0.8, 1),
      make_receptacle("b", 2, 0, 0.5, 0.5, 0.5, 0.4, 1)};
  const SceneDescription scene("zero", std::move(objects), std::move(receptacles));
  const DemonstrationSet demos =
      DemonstrationSet::validated(scene, {demo(scene, {{"o1", "a", kSlotA}})});
  CHECK(error_code_of([&] { estimate_accessibility(scene, demos); }) ==
        ErrorCode::degenerate_usage);
}

TEST_CASE("likert weights are per-construct means normalized to sum 1") {
  LikertResponse uniform;
  uniform.items = {3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3};
  const PreferenceWeights w = weights_from_likert(uniform);
  CHECK(w.spatial == 0.25);
  CHECK(w.habitual == 0.25);
  CHECK(w.semantic == 0.25);
  CHECK(w.commonsense == 0.25);

  LikertResponse skewed;
  skewed.items = {5, 5, 5, 1, 1, 1, 3, 3, 3, 1, 1, 1};
  const PreferenceWeights s = weights_from_likert(skewed);
  CHECK(s.spatial == 0.5);
  CHECK(s.habitual == 0.1);
  CHECK(s.semantic == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(s.commonsense == 0.1);
  CHECK_NOTHROW(s.validate());

  LikertResponse bad;
  bad.items = {3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 6};
  CHECK(error_code_of([&] { weights_from_likert(bad); }) == ErrorCode::validation);
  bad.items[11] = 0;
  CHECK(error_code_of([&] { weights_from_likert(bad); }) == ErrorCode::validation);
}

TEST_CASE("bundle validation demands full coverage") {
  const SceneDescription scene = two_slot_scene(2);
  PriorBundle bundle = tidyplan::testing::neutral_bundle(scene);
  CHECK_NOTHROW(bundle.validate_against(scene));

  PriorBundle missing_spatial = bundle;
  missing_spatial.spatial = SpatialPriors{};
  missing_spatial.spatial.set("o1", kSlotA);
  CHECK(error_code_of([&] { missing_spatial.validate_against(scene); }) ==
        ErrorCode::coverage);

  PriorBundle missing_affinity = bundle;
  missing_affinity.affinities = SemanticAffinities{};
  CHECK(error_code_of([&] { missing_affinity.validate_against(scene); }) ==
        ErrorCode::coverage);

  PriorBundle missing_commonsense = bundle;
  missing_commonsense.commonsense = CommonsensePriorTable{};
  CHECK(error_code_of([&] { missing_commonsense.validate_against(scene); }) ==
        ErrorCode::coverage);

  PriorBundle unknown_receptacle = bundle;
  unknown_receptacle.accessibility = {{"nope", 0.5}};
  CHECK(error_code_of([&] { unknown_receptacle.validate_against(scene); }) ==
        ErrorCode::reference);

  PriorBundle bad_alpha = bundle;
  bad_alpha.accessibility = {{"a", 1.5}};
  CHECK(error_code_of([&] { bad_alpha.validate_against(scene); }) ==
        ErrorCode::validation);

  PriorBundle bad_weights = bundle;
  bad_weights.weights = PreferenceWeights{0.5, 0.5, 0.5, 0.5};
  CHECK(error_code_of([&] { bad_weights.validate_against(scene); }) ==
        ErrorCode::validation);
}
