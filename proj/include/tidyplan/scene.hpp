#pragma once

#include <string>
#include <vector>

#include "tidyplan/geometry.hpp"

namespace tidyplan {

// Object footprint: axis-aligned box, dimensions in meters.
struct Footprint {
  double width = 0.0;
  double depth = 0.0;
  double height = 0.0;
};

struct ObjectSpec {
  std::string id;    // unique within the scene
  std::string name;  // human-readable label
  Footprint footprint;
  double usage_frequency = 0.0;  // uses per week, >= 0
};

// Horizontal support surface: rectangle with origin (x, y), extents (w, d),
// sitting at height z. Placements rest on top of it.
struct SurfaceRect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double d = 0.0;
  double z = 0.0;
};

struct ReceptacleSpec {
  std::string id;
  std::string name;
  SurfaceRect surface;
  double accessibility = 0.5;  // in [0, 1]
  int grid_resolution = 1;     // slots per axis, >= 1
};

struct Placement {
  std::string object_id;
  std::string receptacle_id;
  Vec3 position;  // footprint center; z equals the surface height
};

// Partial or complete assignment of objects to receptacle surfaces.
struct Arrangement {
  std::string scene_ref;
  std::vector<Placement> placements;

  bool has_object(const std::string& object_id) const;
  const Placement* find(const std::string& object_id) const;
  bool empty() const { return placements.empty(); }
  std::size_t size() const { return placements.size(); }
};

class SceneDescription {
 public:
  // Validates structural invariants and rejects scenes containing an object
  // that fits on no receptacle slot. Computes the bounding-box diagonal used
  // for distance normalization.
  SceneDescription(std::string id, std::vector<ObjectSpec> objects,
                   std::vector<ReceptacleSpec> receptacles);

  const std::string& id() const { return id_; }
  const std::vector<ObjectSpec>& objects() const { return objects_; }
  const std::vector<ReceptacleSpec>& receptacles() const { return receptacles_; }
  double diagonal() const { return diagonal_; }

  const ObjectSpec* find_object(const std::string& object_id) const;
  const ReceptacleSpec* find_receptacle(const std::string& receptacle_id) const;

  // Same scene with some receptacle accessibilities replaced; used to apply
  // estimated accessibility values without mutating the source description.
  SceneDescription with_accessibility(
      const std::vector<std::pair<std::string, double>>& overrides) const;

 private:
  std::string id_;
  std::vector<ObjectSpec> objects_;
  std::vector<ReceptacleSpec> receptacles_;
  double diagonal_ = 0.0;
};

struct Violation {
  enum class Kind { duplicate_assignment, out_of_surface, overlap };
  Kind kind;
  std::string object_a;
  std::string object_b;  // set for overlap violations only
  std::string message;
};

struct Validity {
  bool ok = true;
  std::vector<Violation> violations;
};

// One placement step: put object_id at the slot_index-th grid slot of
// receptacle_id. position caches the slot center.
struct PlacementAction {
  std::string object_id;
  std::string receptacle_id;
  int slot_index = 0;
  Vec3 position;
};

// Checks unique assignment, surface containment and pairwise non-overlap.
// Unknown ids raise a reference error; constraint breaches are enumerated.
Validity validate_arrangement(const SceneDescription& scene, const Arrangement& x);

// Grid slot centers of a receptacle surface in row-major order (x varies
// fastest). grid_resolution^2 points at the surface height.
std::vector<Vec3> candidate_slots(const SceneDescription& scene,
                                  const std::string& receptacle_id);

// True iff the object footprint centered at position lies inside the
// receptacle surface and does not collide with any occupant of that
// receptacle already in x. Does not check whether the object is placed twice.
bool placement_fits(const SceneDescription& scene, const Arrangement& x,
                    const std::string& object_id, const std::string& receptacle_id,
                    const Vec3& position);

// All feasible placement actions for unplaced objects, ordered by
// (object id, receptacle id, slot index). The input must itself be feasible.
std::vector<PlacementAction> admissible_actions(const SceneDescription& scene,
                                                const Arrangement& x);

// Returns a copy of x extended by the action. Does not re-validate.
Arrangement apply_action(const Arrangement& x, const PlacementAction& action);

// Similarity of the (object, receptacle) pair sets of two arrangements over
// the same scene: |intersection| / |union|, defined as 1 when both are empty.
double jaccard_similarity(const Arrangement& a, const Arrangement& b);

}  // namespace tidyplan
