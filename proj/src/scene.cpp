#include "tidyplan/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "tidyplan/error.hpp"

namespace tidyplan {

namespace {

bool footprint_inside_surface(const Footprint& fp, const SurfaceRect& s, const Vec3& pos) {
  const double hw = fp.width / 2.0;
  const double hd = fp.depth / 2.0;
  return pos.x - hw >= s.x - kGeomEps && pos.x + hw <= s.x + s.w + kGeomEps &&
         pos.y - hd >= s.y - kGeomEps && pos.y + hd <= s.y + s.d + kGeomEps &&
         std::abs(pos.z - s.z) <= kGeomEps;
}

bool boxes_overlap(const Footprint& fa, const Vec3& pa, const Footprint& fb, const Vec3& pb) {
  return spans_overlap(pa.x - fa.width / 2.0, pa.x + fa.width / 2.0,
                       pb.x - fb.width / 2.0, pb.x + fb.width / 2.0) &&
         spans_overlap(pa.y - fa.depth / 2.0, pa.y + fa.depth / 2.0,
                       pb.y - fb.depth / 2.0, pb.y + fb.depth / 2.0) &&
         spans_overlap(pa.z, pa.z + fa.height, pb.z, pb.z + fb.height);
}

std::vector<Vec3> slots_of(const ReceptacleSpec& r) {
  const int g = r.grid_resolution;
  std::vector<Vec3> slots;
  slots.reserve(static_cast<std::size_t>(g) * g);
  for (int iy = 0; iy < g; ++iy) {
    for (int ix = 0; ix < g; ++ix) {
      slots.push_back({r.surface.x + (ix + 0.5) * r.surface.w / g,
                       r.surface.y + (iy + 0.5) * r.surface.d / g, r.surface.z});
    }
  }
  return slots;
}

}  // namespace

bool Arrangement::has_object(const std::string& object_id) const {
  return find(object_id) != nullptr;
}

const Placement* Arrangement::find(const std::string& object_id) const {
  for (const auto& p : placements) {
    if (p.object_id == object_id) return &p;
  }
  return nullptr;
}

SceneDescription::SceneDescription(std::string id, std::vector<ObjectSpec> objects,
                                   std::vector<ReceptacleSpec> receptacles)
    : id_(std::move(id)), objects_(std::move(objects)), receptacles_(std::move(receptacles)) {
  if (id_.empty()) fail(ErrorCode::validation, "scene id must not be empty");
  if (receptacles_.empty())
    fail(ErrorCode::validation, "scene '" + id_ + "' has no receptacles");

  std::set<std::string> seen;
  for (const auto& o : objects_) {
    if (o.id.empty()) fail(ErrorCode::validation, "object id must not be empty");
    if (!seen.insert(o.id).second)
      fail(ErrorCode::validation, "duplicate object id '" + o.id + "'");
    if (!(o.footprint.width > 0.0) || !(o.footprint.depth > 0.0) || !(o.footprint.height > 0.0))
      fail(ErrorCode::validation, "object '" + o.id + "' footprint dimensions must be positive");
    if (!(o.usage_frequency >= 0.0) || !std::isfinite(o.usage_frequency))
      fail(ErrorCode::validation, "object '" + o.id + "' usage_frequency must be >= 0");
  }
  seen.clear();
  for (const auto& r : receptacles_) {
    if (r.id.empty()) fail(ErrorCode::validation, "receptacle id must not be empty");
    if (!seen.insert(r.id).second)
      fail(ErrorCode::validation, "duplicate receptacle id '" + r.id + "'");
    if (!(r.surface.w > 0.0) || !(r.surface.d > 0.0))
      fail(ErrorCode::validation, "receptacle '" + r.id + "' surface extents must be positive");
    if (r.accessibility < 0.0 || r.accessibility > 1.0)
      fail(ErrorCode::validation, "receptacle '" + r.id + "' accessibility must be in [0,1]");
    if (r.grid_resolution < 1)
      fail(ErrorCode::validation, "receptacle '" + r.id + "' grid_resolution must be >= 1");
  }

  // Every object must fit on at least one slot of some receptacle.
  for (const auto& o : objects_) {
    bool fits = false;
    for (const auto& r : receptacles_) {
      for (const auto& slot : slots_of(r)) {
        if (footprint_inside_surface(o.footprint, r.surface, slot)) {
          fits = true;
          break;
        }
      }
      if (fits) break;
    }
    if (!fits)
      fail(ErrorCode::validation,
           "object '" + o.id + "' does not fit on any receptacle slot in scene '" + id_ + "'");
  }

  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = hi_x, lo_z = lo_x, hi_z = hi_x;
  for (const auto& r : receptacles_) {
    lo_x = std::min(lo_x, r.surface.x);
    hi_x = std::max(hi_x, r.surface.x + r.surface.w);
    lo_y = std::min(lo_y, r.surface.y);
    hi_y = std::max(hi_y, r.surface.y + r.surface.d);
    lo_z = std::min(lo_z, r.surface.z);
    hi_z = std::max(hi_z, r.surface.z);
  }
  diagonal_ = Vec3{hi_x - lo_x, hi_y - lo_y, hi_z - lo_z}.norm();
  if (!(diagonal_ > 0.0))
    fail(ErrorCode::validation, "scene '" + id_ + "' bounding box diagonal must be positive");
}

const ObjectSpec* SceneDescription::find_object(const std::string& object_id) const {
  for (const auto& o : objects_) {
    if (o.id == object_id) return &o;
  }
  return nullptr;
}

const ReceptacleSpec* SceneDescription::find_receptacle(const std::string& receptacle_id) const {
  for (const auto& r : receptacles_) {
    if (r.id == receptacle_id) return &r;
  }
  return nullptr;
}

SceneDescription SceneDescription::with_accessibility(
    const std::vector<std::pair<std::string, double>>& overrides) const {
  std::vector<ReceptacleSpec> receptacles = receptacles_;
  for (const auto& [rec_id, alpha] : overrides) {
    bool found = false;
    for (auto& r : receptacles) {
      if (r.id == rec_id) {
        r.accessibility = alpha;
        found = true;
        break;
      }
    }
    if (!found)
      fail(ErrorCode::reference, "accessibility override names unknown receptacle '" + rec_id + "'");
  }
  return SceneDescription(id_, objects_, receptacles);
}

Validity validate_arrangement(const SceneDescription& scene, const Arrangement& x) {
  if (x.scene_ref != scene.id())
    fail(ErrorCode::reference, "arrangement references scene '" + x.scene_ref +
                                   "' but was validated against '" + scene.id() + "'");

  Validity verdict;
  auto flag = [&verdict](Violation v) {
    verdict.ok = false;
    verdict.violations.push_back(std::move(v));
  };

  std::set<std::string> duplicates_reported;
  std::set<std::string> seen;
  for (const auto& p : x.placements) {
    const ObjectSpec* obj = scene.find_object(p.object_id);
    if (obj == nullptr)
      fail(ErrorCode::reference,
           "arrangement places unknown object '" + p.object_id + "'");
    const ReceptacleSpec* rec = scene.find_receptacle(p.receptacle_id);
    if (rec == nullptr)
      fail(ErrorCode::reference,
           "arrangement places '" + p.object_id + "' on unknown receptacle '" + p.receptacle_id + "'");

    if (!seen.insert(p.object_id).second) {
      if (duplicates_reported.insert(p.object_id).second) {
        flag({Violation::Kind::duplicate_assignment, p.object_id, "",
              "duplicate assignment of object '" + p.object_id + "'"});
      }
      continue;
    }

    if (!footprint_inside_surface(obj->footprint, rec->surface, p.position)) {
      std::ostringstream msg;
      msg << "object '" << p.object_id << "' footprint not contained by surface of '"
          << p.receptacle_id << "'";
      flag({Violation::Kind::out_of_surface, p.object_id, "", msg.str()});
    }
  }

  for (std::size_t i = 0; i < x.placements.size(); ++i) {
    for (std::size_t j = i + 1; j < x.placements.size(); ++j) {
      const auto& a = x.placements[i];
      const auto& b = x.placements[j];
      if (a.object_id == b.object_id || a.receptacle_id != b.receptacle_id) continue;
      const ObjectSpec* oa = scene.find_object(a.object_id);
      const ObjectSpec* ob = scene.find_object(b.object_id);
      if (boxes_overlap(oa->footprint, a.position, ob->footprint, b.position)) {
        flag({Violation::Kind::overlap, a.object_id, b.object_id,
              "objects '" + a.object_id + "' and '" + b.object_id + "' overlap on '" +
                  a.receptacle_id + "'"});
      }
    }
  }

  return verdict;
}

std::vector<Vec3> candidate_slots(const SceneDescription& scene,
                                  const std::string& receptacle_id) {
  const ReceptacleSpec* rec = scene.find_receptacle(receptacle_id);
  if (rec == nullptr)
    fail(ErrorCode::reference, "unknown receptacle '" + receptacle_id + "'");
  return slots_of(*rec);
}

bool placement_fits(const SceneDescription& scene, const Arrangement& x,
                    const std::string& object_id, const std::string& receptacle_id,
                    const Vec3& position) {
  const ObjectSpec* obj = scene.find_object(object_id);
  if (obj == nullptr) fail(ErrorCode::reference, "unknown object '" + object_id + "'");
  const ReceptacleSpec* rec = scene.find_receptacle(receptacle_id);
  if (rec == nullptr) fail(ErrorCode::reference, "unknown receptacle '" + receptacle_id + "'");

  if (!footprint_inside_surface(obj->footprint, rec->surface, position)) return false;
  for (const auto& p : x.placements) {
    if (p.receptacle_id != receptacle_id) continue;
    const ObjectSpec* other = scene.find_object(p.object_id);
    if (other == nullptr)
      fail(ErrorCode::reference, "arrangement places unknown object '" + p.object_id + "'");
    if (boxes_overlap(obj->footprint, position, other->footprint, p.position)) return false;
  }
  return true;
}

std::vector<PlacementAction> admissible_actions(const SceneDescription& scene,
                                                const Arrangement& x) {
  Validity verdict = validate_arrangement(scene, x);
  if (!verdict.ok)
    fail(ErrorCode::precondition,
         "admissible_actions requires a feasible arrangement; first violation: " +
             verdict.violations.front().message);

  std::vector<const ObjectSpec*> unplaced;
  for (const auto& o : scene.objects()) {
    if (!x.has_object(o.id)) unplaced.push_back(&o);
  }
  std::sort(unplaced.begin(), unplaced.end(),
            [](const ObjectSpec* a, const ObjectSpec* b) { return a->id < b->id; });

  std::vector<const ReceptacleSpec*> receptacles;
  receptacles.reserve(scene.receptacles().size());
  for (const auto& r : scene.receptacles()) receptacles.push_back(&r);
  std::sort(receptacles.begin(), receptacles.end(),
            [](const ReceptacleSpec* a, const ReceptacleSpec* b) { return a->id < b->id; });

  // Placements grouped by receptacle so overlap checks stay local.
  std::map<std::string, std::vector<const Placement*>> occupants;
  for (const auto& p : x.placements) occupants[p.receptacle_id].push_back(&p);

  std::vector<PlacementAction> actions;
  for (const ObjectSpec* obj : unplaced) {
    for (const ReceptacleSpec* rec : receptacles) {
      const auto slots = slots_of(*rec);
      const auto it = occupants.find(rec->id);
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if (!footprint_inside_surface(obj->footprint, rec->surface, slots[s])) continue;
        bool collides = false;
        if (it != occupants.end()) {
          for (const Placement* p : it->second) {
            const ObjectSpec* other = scene.find_object(p->object_id);
            if (boxes_overlap(obj->footprint, slots[s], other->footprint, p->position)) {
              collides = true;
              break;
            }
          }
        }
        if (!collides)
          actions.push_back({obj->id, rec->id, static_cast<int>(s), slots[s]});
      }
    }
  }
  return actions;
}

Arrangement apply_action(const Arrangement& x, const PlacementAction& action) {
  Arrangement next = x;
  next.placements.push_back({action.object_id, action.receptacle_id, action.position});
  return next;
}

double jaccard_similarity(const Arrangement& a, const Arrangement& b) {
  if (a.scene_ref != b.scene_ref)
    fail(ErrorCode::comparison, "jaccard_similarity operands reference different scenes ('" +
                                    a.scene_ref + "' vs '" + b.scene_ref + "')");
  std::set<std::pair<std::string, std::string>> sa, sb;
  for (const auto& p : a.placements) sa.insert({p.object_id, p.receptacle_id});
  for (const auto& p : b.placements) sb.insert({p.object_id, p.receptacle_id});
  if (sa.empty() && sb.empty()) return 1.0;

  std::size_t inter = 0;
  for (const auto& pair : sa) inter += sb.count(pair);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    case ErrorCode::reference: return "reference";
    case ErrorCode::coverage: return "coverage";
    case ErrorCode::validation: return "validation";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::comparison: return "comparison";
    case ErrorCode::degenerate_usage: return "degenerate-usage";
    case ErrorCode::capacity: return "capacity";
    case ErrorCode::oracle_parse: return "oracle-parse";
    case ErrorCode::transport: return "transport";
    case ErrorCode::completeness: return "completeness";
    case ErrorCode::config: return "config";
    case ErrorCode::usage: return "usage";
  }
  return "unknown";
}

}  // namespace tidyplan
