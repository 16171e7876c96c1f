#include "tidyplan/json_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>

#include "tidyplan/error.hpp"

namespace tidyplan {

namespace {

[[noreturn]] void bad(const std::string& context, const std::string& message) {
  fail(ErrorCode::parse, context + ": " + message);
}

Vec3 vec3_from(const Json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number())
    bad(context, "expected a position array [x, y, z]");
  Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  if (!is_finite(v)) bad(context, "position components must be finite");
  return v;
}

Json vec3_to(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

std::string string_field(const Json& j, const char* key, const std::string& context) {
  if (!j.contains(key) || !j[key].is_string())
    bad(context, std::string("missing or non-string field '") + key + "'");
  return j[key].get<std::string>();
}

double number_field(const Json& j, const char* key, const std::string& context) {
  if (!j.contains(key) || !j[key].is_number())
    bad(context, std::string("missing or non-numeric field '") + key + "'");
  return j[key].get<double>();
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "' for reading");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
      fail(ErrorCode::io, "cannot create directory '" + path.parent_path().string() +
                              "': " + ec.message());
  }
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}

SceneDescription scene_from_json(const Json& doc, const std::string& context) {
  if (!doc.is_object()) bad(context, "scene document must be an object");
  const std::string id = string_field(doc, "id", context);
  if (!doc.contains("objects") || !doc["objects"].is_array())
    bad(context, "missing 'objects' array");
  if (!doc.contains("receptacles") || !doc["receptacles"].is_array())
    bad(context, "missing 'receptacles' array");

  std::vector<ObjectSpec> objects;
  for (const auto& jo : doc["objects"]) {
    ObjectSpec o;
    o.id = string_field(jo, "id", context);
    o.name = string_field(jo, "name", context);
    if (!jo.contains("footprint") || !jo["footprint"].is_object())
      bad(context, "object '" + o.id + "' is missing its footprint");
    const auto& jf = jo["footprint"];
    o.footprint.width = number_field(jf, "width", context);
    o.footprint.depth = number_field(jf, "depth", context);
    o.footprint.height = number_field(jf, "height", context);
    o.usage_frequency = number_field(jo, "usage_frequency", context);
    objects.push_back(std::move(o));
  }

  std::vector<ReceptacleSpec> receptacles;
  for (const auto& jr : doc["receptacles"]) {
    ReceptacleSpec r;
    r.id = string_field(jr, "id", context);
    r.name = string_field(jr, "name", context);
    if (!jr.contains("surface") || !jr["surface"].is_object())
      bad(context, "receptacle '" + r.id + "' is missing its surface");
    const auto& js = jr["surface"];
    r.surface.x = number_field(js, "x", context);
    r.surface.y = number_field(js, "y", context);
    r.surface.w = number_field(js, "w", context);
    r.surface.d = number_field(js, "d", context);
    r.surface.z = number_field(js, "z", context);
    if (jr.contains("accessibility")) r.accessibility = number_field(jr, "accessibility", context);
    if (jr.contains("grid_resolution")) {
      if (!jr["grid_resolution"].is_number_integer())
        bad(context, "receptacle '" + r.id + "' grid_resolution must be an integer");
      r.grid_resolution = jr["grid_resolution"].get<int>();
    }
    receptacles.push_back(std::move(r));
  }

  return SceneDescription(id, std::move(objects), std::move(receptacles));
}

SceneDescription load_scene(const std::filesystem::path& path) {
  return scene_from_json(read_json_file(path), path.string());
}

Json arrangement_to_json(const Arrangement& x) {
  Json doc;
  doc["scene_ref"] = x.scene_ref;
  Json placements = Json::array();
  for (const auto& p : x.placements) {
    Json jp;
    jp["object_id"] = p.object_id;
    jp["receptacle_id"] = p.receptacle_id;
    jp["position"] = vec3_to(p.position);
    placements.push_back(std::move(jp));
  }
  doc["placements"] = std::move(placements);
  return doc;
}

Arrangement arrangement_from_json(const Json& doc, const std::string& context) {
  if (!doc.is_object()) bad(context, "arrangement document must be an object");
  Arrangement x;
  x.scene_ref = string_field(doc, "scene_ref", context);
  if (!doc.contains("placements") || !doc["placements"].is_array())
    bad(context, "missing 'placements' array");
  for (const auto& jp : doc["placements"]) {
    Placement p;
    p.object_id = string_field(jp, "object_id", context);
    p.receptacle_id = string_field(jp, "receptacle_id", context);
    if (!jp.contains("position")) bad(context, "placement of '" + p.object_id + "' lacks a position");
    p.position = vec3_from(jp["position"], context);
    x.placements.push_back(std::move(p));
  }
  return x;
}

Arrangement load_arrangement(const std::filesystem::path& path) {
  return arrangement_from_json(read_json_file(path), path.string());
}

void save_arrangement(const std::filesystem::path& path, const Arrangement& x) {
  write_json_file(path, arrangement_to_json(x));
}

std::vector<Arrangement> load_demonstrations(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  if (!doc.is_object() || !doc.contains("demonstrations") || !doc["demonstrations"].is_array())
    bad(path.string(), "expected an object with a 'demonstrations' array");
  std::vector<Arrangement> demos;
  for (const auto& jd : doc["demonstrations"])
    demos.push_back(arrangement_from_json(jd, path.string()));
  return demos;
}

void save_demonstrations(const std::filesystem::path& path,
                         const std::vector<Arrangement>& demos) {
  Json doc;
  Json list = Json::array();
  for (const auto& d : demos) list.push_back(arrangement_to_json(d));
  doc["demonstrations"] = std::move(list);
  write_json_file(path, doc);
}

LikertResponse load_likert(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array())
    bad(path.string(), "expected an object with an 'items' array");
  const auto& items = doc["items"];
  if (items.size() != 12)
    bad(path.string(), "'items' must hold exactly 12 ratings, got " +
                           std::to_string(items.size()));
  LikertResponse response;
  for (std::size_t i = 0; i < 12; ++i) {
    if (!items[i].is_number_integer())
      bad(path.string(), "'items[" + std::to_string(i) + "]' must be an integer");
    response.items[i] = items[i].get<int>();
  }
  if (doc.contains("participant_id")) {
    if (!doc["participant_id"].is_string())
      bad(path.string(), "'participant_id' must be a string");
    response.participant_id = doc["participant_id"].get<std::string>();
  }
  return response;
}

CommonsensePriorTable commonsense_from_json(const Json& rows, const std::string& context) {
  if (!rows.is_array()) bad(context, "commonsense rows must be an array");
  CommonsensePriorTable table;
  std::set<std::string> provenances;
  for (const auto& jr : rows) {
    const std::string object_id = string_field(jr, "object_id", context);
    const std::string receptacle_id = string_field(jr, "receptacle_id", context);
    if (table.get(object_id, receptacle_id).has_value())
      bad(context,
          "duplicate commonsense row for ('" + object_id + "', '" + receptacle_id + "')");
    table.set(object_id, receptacle_id, number_field(jr, "score", context));
    provenances.insert(string_field(jr, "provenance", context));
  }
  if (provenances.size() == 1) table.set_provenance(*provenances.begin());
  else if (provenances.size() > 1) table.set_provenance("mixed");
  return table;
}

Json commonsense_to_json(const CommonsensePriorTable& table) {
  Json rows = Json::array();
  for (const auto& [pair, score] : table.entries()) {
    Json jr;
    jr["object_id"] = pair.first;
    jr["receptacle_id"] = pair.second;
    jr["score"] = score;
    jr["provenance"] = table.provenance();
    rows.push_back(std::move(jr));
  }
  return rows;
}

CommonsensePriorTable load_commonsense(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  if (doc.is_object() && doc.contains("commonsense"))
    return commonsense_from_json(doc["commonsense"], path.string());
  return commonsense_from_json(doc, path.string());
}

void save_commonsense(const std::filesystem::path& path, const CommonsensePriorTable& table) {
  write_json_file(path, commonsense_to_json(table));
}

Json bundle_to_json(const PriorBundle& bundle) {
  Json doc;
  Json priors = Json::object();
  for (const auto& [object_id, position] : bundle.spatial.entries())
    priors[object_id] = vec3_to(position);
  doc["spatial_priors"] = std::move(priors);

  Json affinities = Json::array();
  for (const auto& [pair, sigma] : bundle.affinities.entries()) {
    Json ja;
    ja["a"] = pair.first;
    ja["b"] = pair.second;
    ja["sigma"] = sigma;
    affinities.push_back(std::move(ja));
  }
  doc["affinities"] = std::move(affinities);

  doc["commonsense"] = commonsense_to_json(bundle.commonsense);
  doc["weights"] = Json::array({bundle.weights.spatial, bundle.weights.habitual,
                                bundle.weights.semantic, bundle.weights.commonsense});

  if (!bundle.accessibility.empty()) {
    auto sorted = bundle.accessibility;
    std::sort(sorted.begin(), sorted.end());
    Json alpha = Json::object();
    for (const auto& [receptacle_id, value] : sorted) alpha[receptacle_id] = value;
    doc["accessibility"] = std::move(alpha);
  }
  return doc;
}

PriorBundle bundle_from_json(const Json& doc, const std::string& context) {
  if (!doc.is_object()) bad(context, "prior bundle document must be an object");
  PriorBundle bundle;

  if (!doc.contains("spatial_priors") || !doc["spatial_priors"].is_object())
    bad(context, "missing 'spatial_priors' object");
  for (const auto& [object_id, jp] : doc["spatial_priors"].items())
    bundle.spatial.set(object_id, vec3_from(jp, context));

  if (!doc.contains("affinities") || !doc["affinities"].is_array())
    bad(context, "missing 'affinities' array");
  for (const auto& ja : doc["affinities"]) {
    bundle.affinities.set(string_field(ja, "a", context), string_field(ja, "b", context),
                          number_field(ja, "sigma", context));
  }

  if (!doc.contains("commonsense"))
    bad(context, "missing 'commonsense' array");
  bundle.commonsense = commonsense_from_json(doc["commonsense"], context);

  if (!doc.contains("weights") || !doc["weights"].is_array() || doc["weights"].size() != 4)
    bad(context, "'weights' must be an array of 4 numbers");
  const auto& jw = doc["weights"];
  for (const auto& w : jw)
    if (!w.is_number()) bad(context, "'weights' must be an array of 4 numbers");
  bundle.weights = {jw[0].get<double>(), jw[1].get<double>(), jw[2].get<double>(),
                    jw[3].get<double>()};
  bundle.weights.validate();

  if (doc.contains("accessibility")) {
    if (!doc["accessibility"].is_object())
      bad(context, "'accessibility' must map receptacle ids to numbers");
    for (const auto& [receptacle_id, jv] : doc["accessibility"].items()) {
      if (!jv.is_number()) bad(context, "'accessibility." + receptacle_id + "' must be a number");
      bundle.accessibility.emplace_back(receptacle_id, jv.get<double>());
    }
    std::sort(bundle.accessibility.begin(), bundle.accessibility.end());
  }
  return bundle;
}

PriorBundle load_bundle(const std::filesystem::path& path) {
  return bundle_from_json(read_json_file(path), path.string());
}

void save_bundle(const std::filesystem::path& path, const PriorBundle& bundle) {
  write_json_file(path, bundle_to_json(bundle));
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  if (!doc.is_object()) bad(path.string(), "ground truth document must be an object");
  GroundTruth gt;
  gt.scene_ref = string_field(doc, "scene_ref", path.string());
  if (!doc.contains("assignment") || !doc["assignment"].is_object())
    bad(path.string(), "missing 'assignment' object");
  for (const auto& [object_id, jr] : doc["assignment"].items()) {
    if (!jr.is_string())
      bad(path.string(), "'assignment." + object_id + "' must be a receptacle id string");
    gt.assignment[object_id] = jr.get<std::string>();
  }
  return gt;
}

void save_ground_truth(const std::filesystem::path& path, const GroundTruth& gt) {
  Json doc;
  doc["scene_ref"] = gt.scene_ref;
  Json assignment = Json::object();
  for (const auto& [object_id, receptacle_id] : gt.assignment)
    assignment[object_id] = receptacle_id;
  doc["assignment"] = std::move(assignment);
  write_json_file(path, doc);
}

namespace {

Json reward_to_json(const RewardResult& r) {
  Json j;
  j["spatial"] = r.scores.spatial;
  j["habitual"] = r.scores.habitual;
  j["semantic"] = r.scores.semantic;
  j["commonsense"] = r.scores.commonsense;
  j["total"] = r.total;
  return j;
}

}  // namespace

Json plan_result_to_json(const PlanResult& result, const PlannerConfig& cfg,
                         const std::string& created_utc) {
  Json doc;
  Json meta;
  meta["created_utc"] = created_utc;
  meta["format"] = "tidyplan.plan.v1";
  doc["meta"] = std::move(meta);

  Json config;
  config["iterations"] = cfg.iterations;
  config["exploration_c"] = cfg.exploration_c;
  config["seed"] = cfg.seed;
  config["trees"] = cfg.trees;
  doc["config"] = std::move(config);

  doc["scene_ref"] = result.final.scene_ref;
  doc["iterations_used"] = result.iterations_used;
  doc["flagged_rollouts"] = result.flagged_rollouts;

  Json trajectory = Json::array();
  for (const auto& a : result.trajectory) {
    Json ja;
    ja["object_id"] = a.object_id;
    ja["receptacle_id"] = a.receptacle_id;
    ja["slot_index"] = a.slot_index;
    ja["position"] = vec3_to(a.position);
    trajectory.push_back(std::move(ja));
  }
  doc["trajectory"] = std::move(trajectory);

  Json trace = Json::array();
  for (const auto& r : result.reward_trace) trace.push_back(reward_to_json(r));
  doc["reward_trace"] = std::move(trace);

  doc["final"] = arrangement_to_json(result.final);
  doc["final_reward"] =
      result.reward_trace.empty() ? 1.0 : result.reward_trace.back().total;
  return doc;
}

void save_plan_result(const std::filesystem::path& path, const PlanResult& result,
                      const PlannerConfig& cfg, const std::string& created_utc) {
  write_json_file(path, plan_result_to_json(result, cfg, created_utc));
}

Json eval_report_to_json(const EvalReport& report) {
  Json doc;
  doc["object_accuracy"] = report.object_accuracy;
  doc["jaccard"] = report.jaccard;
  Json rows = Json::array();
  for (const auto& o : report.per_object) {
    Json jr;
    jr["object_id"] = o.object_id;
    jr["predicted"] = o.predicted_receptacle;
    jr["ground_truth"] = o.gt_receptacle;
    jr["match"] = o.match;
    rows.push_back(std::move(jr));
  }
  doc["per_object"] = std::move(rows);
  return doc;
}

Json batch_summary_to_json(const BatchSummary& summary) {
  Json doc;
  doc["mean"] = summary.mean;
  doc["stdev"] = summary.stdev;
  doc["stdev_form"] = "population";
  Json cases = Json::array();
  for (const auto& report : summary.cases) cases.push_back(eval_report_to_json(report));
  doc["cases"] = std::move(cases);
  return doc;
}

std::string utc_timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace tidyplan
