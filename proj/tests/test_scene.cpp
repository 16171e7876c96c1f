#include <cmath>
#include <vector>

#include "doctest.h"
#include "support/builders.hpp"
#include "support/checks.hpp"
#include "tidyplan/scene.hpp"

using namespace tidyplan;
using tidyplan::testing::error_code_of;
using tidyplan::testing::make_object;
using tidyplan::testing::make_receptacle;
using tidyplan::testing::two_slot_scene;

namespace {

Arrangement at(const SceneDescription& scene,
               std::vector<std::tuple<std::string, std::string, Vec3>> placements) {
  Arrangement x;
  x.scene_ref = scene.id();
  for (auto& [obj, rec, pos] : placements) x.placements.push_back({obj, rec, pos});
  return x;
}

}  // namespace

TEST_CASE("scene construction validates structural invariants") {
  auto obj = [] { return make_object("o1", 0.2, 0.2, 0.1, 1.0); };
  auto rec = [] { return make_receptacle("a", 0, 0, 0.5, 0.5, 0.5, 0.8, 1); };

  CHECK(error_code_of([&] { SceneDescription("", {obj()}, {rec()}); }) ==
        ErrorCode::validation);
  CHECK(error_code_of([&] { SceneDescription("s", {obj()}, {}); }) ==
        ErrorCode::validation);
  CHECK(error_code_of([&] { SceneDescription("s", {obj(), obj()}, {rec()}); }) ==
        ErrorCode::validation);
  CHECK(error_code_of([&] {
          SceneDescription("s", {make_object("o1", 0.0, 0.2, 0.1, 1.0)}, {rec()});
        }) == ErrorCode::validation);
  CHECK(error_code_of([&] {
          SceneDescription("s", {make_object("o1", 0.2, 0.2, 0.1, -1.0)}, {rec()});
        }) == ErrorCode::validation);
  CHECK(error_code_of([&] { SceneDescription("s", {obj()}, {rec(), rec()}); }) ==
        ErrorCode::validation);
  CHECK(error_code_of([&] {
          SceneDescription("s", {obj()},
                           {make_receptacle("a", 0, 0, 0.5, 0.5, 0.5, 1.5, 1)});
        }) == ErrorCode::validation);
  CHECK(error_code_of([&] {
          SceneDescription("s", {obj()},
                           {make_receptacle("a", 0, 0, 0.5, 0.5, 0.5, 0.8, 0)});
        }) == ErrorCode::validation);
  // An object wider than every surface fits nowhere.
  CHECK(error_code_of([&] {
          SceneDescription("s", {make_object("o1", 0.9, 0.9, 0.1, 1.0)}, {rec()});
        }) == ErrorCode::validation);
}

TEST_CASE("scene diagonal spans the receptacle bounding box") {
  const SceneDescription scene = two_slot_scene(1);
  // Surfaces cover x in [0, 2.5], y in [0, 0.5], z fixed at 0.5.
  CHECK(scene.diagonal() == doctest::Approx(std::sqrt(2.5 * 2.5 + 0.5 * 0.5)).epsilon(1e-12));
  CHECK(scene.find_object("o1") != nullptr);
  CHECK(scene.find_object("nope") == nullptr);
  CHECK(scene.find_receptacle("b") != nullptr);
  CHECK(scene.find_receptacle("nope") == nullptr);
}

TEST_CASE("with_accessibility replaces values without touching the source") {
  const SceneDescription scene = two_slot_scene(1);
  const SceneDescription adjusted = scene.with_accessibility({{"a", 0.1}});
  CHECK(adjusted.find_receptacle("a")->accessibility == 0.1);
  CHECK(adjusted.find_receptacle("b")->accessibility == 0.4);
  CHECK(scene.find_receptacle("a")->accessibility == 0.8);
  CHECK(error_code_of([&] { scene.with_accessibility({{"nope", 0.5}}); }) ==
        ErrorCode::reference);
}

TEST_CASE("candidate_slots enumerates the grid row-major with x fastest") {
  std::vector<ObjectSpec> objects = {make_object("o1", 0.1, 0.1, 0.1, 1.0)};
  std::vector<ReceptacleSpec> receptacles = {
      make_receptacle("g", 1.0, 2.0, 0.7, 0.4, 0.8, 0.5, 2)};
  const SceneDescription scene("grid", std::move(objects), std::move(receptacles));

  const auto slots = candidate_slots(scene, "g");
  REQUIRE(slots.size() == 4);
  CHECK(slots[0] == Vec3{1.1, 2.2, 0.7});
  CHECK(slots[1] == Vec3{1.3, 2.2, 0.7});
  CHECK(slots[2] == Vec3{1.1, 2.6, 0.7});
  CHECK(slots[3] == Vec3{1.3, 2.6, 0.7});
  CHECK(error_code_of([&] { candidate_slots(scene, "nope"); }) == ErrorCode::reference);

  const SceneDescription single = two_slot_scene(1);
  const auto center = candidate_slots(single, "a");
  REQUIRE(center.size() == 1);
  CHECK(center[0] == Vec3{0.25, 0.25, 0.5});
}

TEST_CASE("placement_fits checks containment and collisions") {
  const SceneDescription scene = two_slot_scene(2);
  Arrangement empty;
  empty.scene_ref = scene.id();
  const Vec3 slot_a{0.25, 0.25, 0.5};

  CHECK(placement_fits(scene, empty, "o1", "a", slot_a));
  // Center close enough to the edge that the footprint sticks out.
  CHECK_FALSE(placement_fits(scene, empty, "o1", "a", Vec3{0.05, 0.25, 0.5}));
  // Wrong height.
  CHECK_FALSE(placement_fits(scene, empty, "o1", "a", Vec3{0.25, 0.25, 0.6}));
  // A 0.5-wide surface exactly fits a 0.5-wide object at its center.
  std::vector<ObjectSpec> tight = {make_object("big", 0.5, 0.5, 0.1, 1.0)};
  std::vector<ReceptacleSpec> recs = {make_receptacle("a", 0, 0, 0.5, 0.5, 0.5, 0.8, 1)};
  const SceneDescription snug("snug", std::move(tight), std::move(recs));
  Arrangement none;
  none.scene_ref = "snug";
  CHECK(placement_fits(snug, none, "big", "a", Vec3{0.25, 0.25, 0.5}));

  const Arrangement occupied = at(scene, {{"o2", "a", slot_a}});
  CHECK_FALSE(placement_fits(scene, occupied, "o1", "a", slot_a));
  // The same spot on the other receptacle is unaffected.
  CHECK(placement_fits(scene, occupied, "o1", "b", Vec3{2.25, 0.25, 0.5}));

  CHECK(error_code_of([&] { placement_fits(scene, empty, "nope", "a", slot_a); }) ==
        ErrorCode::reference);
  CHECK(error_code_of([&] { placement_fits(scene, empty, "o1", "nope", slot_a); }) ==
        ErrorCode::reference);
}

TEST_CASE("admissible_actions lists feasible placements in deterministic order") {
  const SceneDescription scene = two_slot_scene(2);
  Arrangement empty;
  empty.scene_ref = scene.id();

  const auto actions = admissible_actions(scene, empty);
  // Two unplaced objects, two single-slot receptacles each.
  REQUIRE(actions.size() == 4);
  CHECK(actions[0].object_id == "o1");
  CHECK(actions[0].receptacle_id == "a");
  CHECK(actions[1].object_id == "o1");
  CHECK(actions[1].receptacle_id == "b");
  CHECK(actions[2].object_id == "o2");
  CHECK(actions[3].object_id == "o2");
  CHECK(actions[0].position == Vec3{0.25, 0.25, 0.5});

  const Arrangement partial = apply_action(empty, actions[0]);
  const auto remaining = admissible_actions(scene, partial);
  // o1 is placed and o2 cannot share the occupied slot on "a".
  REQUIRE(remaining.size() == 1);
  CHECK(remaining[0].object_id == "o2");
  CHECK(remaining[0].receptacle_id == "b");

  const Arrangement bad =
      at(scene, {{"o1", "a", Vec3{0.25, 0.25, 0.5}}, {"o2", "a", Vec3{0.25, 0.25, 0.5}}});
  CHECK(error_code_of([&] { admissible_actions(scene, bad); }) == ErrorCode::precondition);
}

TEST_CASE("apply_action appends without mutating the input") {
  const SceneDescription scene = two_slot_scene(1);
  Arrangement empty;
  empty.scene_ref = scene.id();
  const PlacementAction action{"o1", "a", 0, Vec3{0.25, 0.25, 0.5}};
  const Arrangement next = apply_action(empty, action);
  CHECK(empty.size() == 0);
  REQUIRE(next.size() == 1);
  CHECK(next.placements[0].object_id == "o1");
  CHECK(next.placements[0].receptacle_id == "a");
  CHECK(next.has_object("o1"));
  CHECK_FALSE(next.has_object("o2"));
  CHECK(next.find("o1")->position == action.position);
}

TEST_CASE("validate_arrangement enumerates violations") {
  const SceneDescription scene = two_slot_scene(2);
  const Vec3 slot_a{0.25, 0.25, 0.5};
  const Vec3 slot_b{2.25, 0.25, 0.5};

  CHECK(validate_arrangement(scene, at(scene, {{"o1", "a", slot_a}, {"o2", "b", slot_b}}))
            .ok);

  const Validity dup =
      validate_arrangement(scene, at(scene, {{"o1", "a", slot_a},
                                             {"o1", "b", slot_b},
                                             {"o1", "b", slot_b}}));
  CHECK_FALSE(dup.ok);
  // Repeated duplicates of the same object are reported once.
  REQUIRE(dup.violations.size() == 1);
  CHECK(dup.violations[0].kind == Violation::Kind::duplicate_assignment);

  const Validity outside =
      validate_arrangement(scene, at(scene, {{"o1", "a", Vec3{0.01, 0.25, 0.5}}}));
  CHECK_FALSE(outside.ok);
  REQUIRE(outside.violations.size() == 1);
  CHECK(outside.violations[0].kind == Violation::Kind::out_of_surface);

  const Validity overlap = validate_arrangement(
      scene, at(scene, {{"o1", "a", slot_a}, {"o2", "a", Vec3{0.3, 0.25, 0.5}}}));
  CHECK_FALSE(overlap.ok);
  REQUIRE(overlap.violations.size() == 1);
  CHECK(overlap.violations[0].kind == Violation::Kind::overlap);
  CHECK(overlap.violations[0].object_a == "o1");
  CHECK(overlap.violations[0].object_b == "o2");

  // Footprints that only touch do not overlap.
  const Validity touching = validate_arrangement(
      scene, at(scene, {{"o1", "a", Vec3{0.1, 0.25, 0.5}}, {"o2", "a", Vec3{0.3, 0.25, 0.5}}}));
  CHECK(touching.ok);

  CHECK(error_code_of([&] {
          validate_arrangement(scene, at(scene, {{"nope", "a", slot_a}}));
        }) == ErrorCode::reference);
  CHECK(error_code_of([&] {
          validate_arrangement(scene, at(scene, {{"o1", "nope", slot_a}}));
        }) == ErrorCode::reference);
  Arrangement foreign;
  foreign.scene_ref = "other";
  CHECK(error_code_of([&] { validate_arrangement(scene, foreign); }) ==
        ErrorCode::reference);
}

TEST_CASE("jaccard_similarity compares assignment sets") {
  const SceneDescription scene = two_slot_scene(2);
  const Vec3 slot_a{0.25, 0.25, 0.5};
  const Vec3 slot_b{2.25, 0.25, 0.5};
  const Arrangement x = at(scene, {{"o1", "a", slot_a}, {"o2", "b", slot_b}});
  const Arrangement y = at(scene, {{"o1", "a", Vec3{0.3, 0.3, 0.5}}, {"o2", "a", slot_a}});

  CHECK(jaccard_similarity(x, x) == 1.0);
  // Positions are irrelevant; only (object, receptacle) pairs count.
  CHECK(jaccard_similarity(x, y) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  Arrangement empty1, empty2;
  empty1.scene_ref = empty2.scene_ref = scene.id();
  CHECK(jaccard_similarity(empty1, empty2) == 1.0);
  CHECK(jaccard_similarity(empty1, x) == 0.0);

  Arrangement foreign;
  foreign.scene_ref = "other";
  CHECK(error_code_of([&] { jaccard_similarity(x, foreign); }) == ErrorCode::comparison);
}
