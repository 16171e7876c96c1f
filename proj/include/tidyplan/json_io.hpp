#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "tidyplan/eval.hpp"
#include "tidyplan/planner.hpp"
#include "tidyplan/priors.hpp"
#include "tidyplan/scene.hpp"

namespace tidyplan {

// Insertion-ordered documents keep output key order deterministic.
using Json = nlohmann::ordered_json;

// Reads and parses, mapping filesystem problems to ErrorCode::io and malformed
// documents to ErrorCode::parse.
Json read_json_file(const std::filesystem::path& path);

// Pretty-prints with two-space indent and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);

SceneDescription scene_from_json(const Json& doc, const std::string& context);
SceneDescription load_scene(const std::filesystem::path& path);

Json arrangement_to_json(const Arrangement& x);
Arrangement arrangement_from_json(const Json& doc, const std::string& context);
Arrangement load_arrangement(const std::filesystem::path& path);
void save_arrangement(const std::filesystem::path& path, const Arrangement& x);

// Demonstration files hold complete arrangements under "demonstrations".
std::vector<Arrangement> load_demonstrations(const std::filesystem::path& path);
void save_demonstrations(const std::filesystem::path& path,
                         const std::vector<Arrangement>& demos);

LikertResponse load_likert(const std::filesystem::path& path);

// Commonsense rows ({object_id, receptacle_id, score, provenance}) appear both
// as the bundle's "commonsense" section and as standalone fixture files.
CommonsensePriorTable commonsense_from_json(const Json& rows, const std::string& context);
Json commonsense_to_json(const CommonsensePriorTable& table);
CommonsensePriorTable load_commonsense(const std::filesystem::path& path);
void save_commonsense(const std::filesystem::path& path, const CommonsensePriorTable& table);

Json bundle_to_json(const PriorBundle& bundle);
PriorBundle bundle_from_json(const Json& doc, const std::string& context);
PriorBundle load_bundle(const std::filesystem::path& path);
void save_bundle(const std::filesystem::path& path, const PriorBundle& bundle);

GroundTruth load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const std::filesystem::path& path, const GroundTruth& gt);

// created_utc is the only volatile field; everything else is a pure function
// of the inputs.
Json plan_result_to_json(const PlanResult& result, const PlannerConfig& cfg,
                         const std::string& created_utc);
void save_plan_result(const std::filesystem::path& path, const PlanResult& result,
                      const PlannerConfig& cfg, const std::string& created_utc);

Json eval_report_to_json(const EvalReport& report);
Json batch_summary_to_json(const BatchSummary& summary);

// RFC 3339 UTC timestamp with second precision.
std::string utc_timestamp_now();

}  // namespace tidyplan
