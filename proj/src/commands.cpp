#include "tidyplan/commands.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tidyplan/error.hpp"
#include "tidyplan/eval.hpp"
#include "tidyplan/json_io.hpp"
#include "tidyplan/oracle.hpp"
#include "tidyplan/planner.hpp"
#include "tidyplan/priors.hpp"
#include "tidyplan/render.hpp"

namespace tidyplan {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::uint64_t seed = 0;
  int iterations = 10000;
  double exploration_c = 0.7071067811865476;
  bool offline = false;
  std::string out = "out";
};

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec)
      fail(ErrorCode::io,
           "cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}

// Accepts either a bare arrangement document or a plan result (which carries
// the arrangement under "final").
Arrangement load_arrangement_or_plan(const fs::path& path) {
  const Json doc = read_json_file(path);
  if (doc.is_object() && doc.contains("final"))
    return arrangement_from_json(doc["final"], path.string());
  return arrangement_from_json(doc, path.string());
}

PreferenceWeights weights_from_csv(const std::string& csv) {
  std::vector<double> values;
  std::string token;
  std::istringstream stream(csv);
  while (std::getline(stream, token, ',')) {
    try {
      values.push_back(std::stod(token));
    } catch (const std::exception&) {
      fail(ErrorCode::usage, "--weights expects four comma-separated numbers");
    }
  }
  if (values.size() != 4)
    fail(ErrorCode::usage, "--weights expects four comma-separated numbers");
  PreferenceWeights weights{values[0], values[1], values[2], values[3]};
  weights.validate();
  return weights;
}

struct EstimateArgs {
  std::string scene_path;
  std::string demos_path;
  std::string likert_path;
  std::string weights_csv;
  std::string commonsense_path;
};

int cmd_estimate_priors(const GlobalOptions& global, const EstimateArgs& args) {
  const SceneDescription scene = load_scene(args.scene_path);
  const DemonstrationSet demos =
      DemonstrationSet::validated(scene, load_demonstrations(args.demos_path));

  PriorBundle bundle;
  bundle.spatial = estimate_spatial_priors(scene, demos);
  bundle.affinities =
      estimate_affinities(demos, static_cast<int>(scene.receptacles().size()));
  bundle.accessibility = estimate_accessibility(scene, demos);
  bundle.commonsense = load_commonsense(args.commonsense_path);

  std::string weights_provenance;
  if (!args.likert_path.empty() && !args.weights_csv.empty())
    fail(ErrorCode::usage, "--likert and --weights are mutually exclusive");
  if (!args.likert_path.empty()) {
    bundle.weights = weights_from_likert(load_likert(args.likert_path));
    weights_provenance = "likert '" + args.likert_path + "'";
  } else if (!args.weights_csv.empty()) {
    bundle.weights = weights_from_csv(args.weights_csv);
    weights_provenance = "explicit --weights";
  } else {
    bundle.weights = PreferenceWeights{};
    weights_provenance = "uniform default";
  }

  bundle.validate_against(scene);
  const fs::path out_path = fs::path(global.out) / "bundle.json";
  save_bundle(out_path, bundle);

  std::cout << "scene: " << scene.id() << '\n'
            << "demonstrations: " << demos.arrangements.size() << '\n'
            << "spatial priors: " << bundle.spatial.entries().size()
            << " (modal-receptacle centroids)\n"
            << "affinities: " << bundle.affinities.entries().size()
            << " (co-placement rate vs chance)\n"
            << "accessibility overrides: " << bundle.accessibility.size()
            << " (mean normalized usage of distinct placed objects)\n"
            << "commonsense: " << bundle.commonsense.entries().size() << " entries, provenance "
            << bundle.commonsense.provenance() << '\n'
            << "weights: [" << bundle.weights.spatial << ", " << bundle.weights.habitual
            << ", " << bundle.weights.semantic << ", " << bundle.weights.commonsense
            << "] from " << weights_provenance << '\n'
            << "wrote " << out_path.string() << '\n';
  return 0;
}

struct FetchArgs {
  std::string scene_path;
  std::string backend = "stub";
  std::string stub_path;
  std::string cache_path;
  std::string oracle_config_path;
  int retries = 3;
  int concurrency = 4;
  bool debug = false;
};

int cmd_fetch_commonsense(const GlobalOptions& global, const FetchArgs& args) {
  const SceneDescription scene = load_scene(args.scene_path);

  OracleConfig cfg;
  cfg.max_retries = args.retries;
  cfg.concurrency = args.concurrency;
  if (args.backend == "stub") {
    if (args.stub_path.empty())
      fail(ErrorCode::usage, "--backend stub requires --stub <fixture file>");
    cfg.backend = OracleConfig::Backend::stub;
    cfg.stub_fixture = args.stub_path;
  } else if (args.backend == "remote") {
    if (global.offline)
      fail(ErrorCode::config, "--offline forbids the remote oracle backend");
    cfg.backend = OracleConfig::Backend::remote;
    cfg.endpoint = args.oracle_config_path.empty()
                       ? endpoint_from_environment()
                       : endpoint_from_config_file(args.oracle_config_path);
    cfg.endpoint.debug_log = args.debug;
  } else {
    fail(ErrorCode::usage, "--backend must be 'stub' or 'remote'");
  }

  const fs::path cache_path = args.cache_path.empty()
                                  ? fs::path(global.out) / "oracle_cache.json"
                                  : fs::path(args.cache_path);
  if (cache_path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(cache_path.parent_path(), ec);
  }
  PriorCache cache = PriorCache::open(cache_path);
  const std::size_t cached_before = cache.size();

  const CommonsensePriorTable table = fetch_table(scene, cfg, cache);

  const fs::path out_path = fs::path(global.out) / "commonsense.json";
  save_commonsense(out_path, table);
  std::cout << "scene: " << scene.id() << '\n'
            << "backend: " << args.backend << '\n'
            << "entries: " << table.entries().size() << " (provenance "
            << table.provenance() << ")\n"
            << "cache: " << cache.size() << " entries (" << cached_before
            << " before)\n"
            << "wrote " << out_path.string() << '\n';
  return 0;
}

struct PlanArgs {
  std::string scene_path;
  std::string bundle_path;
  int trees = 1;
  bool exact = false;
  bool quiet = false;
};

PlanResult exact_as_plan_result(const SceneDescription& scene, const PriorBundle& bundle) {
  const auto [arrangement, best_reward] = solve_exact(scene, bundle);
  (void)best_reward;
  const SceneDescription eff = scene.with_accessibility(bundle.accessibility);

  PlanResult result;
  result.final.scene_ref = arrangement.scene_ref;
  Arrangement partial;
  partial.scene_ref = arrangement.scene_ref;
  for (const auto& p : arrangement.placements) {
    // Recover the slot index so the trajectory is as informative as a
    // searched one.
    int slot_index = 0;
    const auto slots = candidate_slots(eff, p.receptacle_id);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (distance(slots[s], p.position) <= kGeomEps) {
        slot_index = static_cast<int>(s);
        break;
      }
    }
    result.trajectory.push_back({p.object_id, p.receptacle_id, slot_index, p.position});
    partial = apply_action(partial, result.trajectory.back());
    result.reward_trace.push_back(reward(eff, partial, bundle.spatial, bundle.affinities,
                                         bundle.commonsense, bundle.weights));
  }
  result.final = partial;
  return result;
}

int cmd_plan(const GlobalOptions& global, const PlanArgs& args) {
  const SceneDescription scene = load_scene(args.scene_path);
  const PriorBundle bundle = load_bundle(args.bundle_path);

  PlannerConfig cfg;
  cfg.iterations = global.iterations;
  cfg.exploration_c = global.exploration_c;
  cfg.seed = global.seed;
  cfg.trees = args.trees;

  PlanResult result;
  if (args.exact) {
    result = exact_as_plan_result(scene, bundle);
    result.seed = cfg.seed;
  } else {
    result = plan(scene, bundle, cfg);
  }

  const fs::path out_dir(global.out);
  save_plan_result(out_dir / "plan.json", result, cfg, utc_timestamp_now());
  write_text_file(out_dir / "plan.txt", render_ascii(scene, result.final));
  write_text_file(out_dir / "plan.svg", render_svg(scene, result.final));

  if (!args.quiet) {
    std::cout << "scene: " << scene.id() << (args.exact ? " (exact)" : "") << '\n';
    std::cout << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
      const auto& a = result.trajectory[i];
      const auto& r = result.reward_trace[i];
      std::cout << "step " << i + 1 << ": " << a.object_id << " -> " << a.receptacle_id
                << " (slot " << a.slot_index << ")  spatial=" << r.scores.spatial
                << " habitual=" << r.scores.habitual << " semantic=" << r.scores.semantic
                << " commonsense=" << r.scores.commonsense << " R=" << r.total << '\n';
    }
    const double final_reward =
        result.reward_trace.empty() ? 1.0 : result.reward_trace.back().total;
    std::cout << "final reward: " << final_reward << '\n'
              << "wrote " << (out_dir / "plan.json").string() << '\n';
  }
  return 0;
}

struct EvalArgs {
  std::vector<std::string> pred_paths;
  std::vector<std::string> gt_paths;
};

int cmd_eval(const GlobalOptions& global, const EvalArgs& args) {
  if (args.pred_paths.empty()) fail(ErrorCode::usage, "--pred requires at least one file");
  if (args.pred_paths.size() != args.gt_paths.size())
    fail(ErrorCode::usage, "--pred and --gt must list the same number of files");

  std::vector<std::pair<Arrangement, GroundTruth>> cases;
  cases.reserve(args.pred_paths.size());
  for (std::size_t i = 0; i < args.pred_paths.size(); ++i) {
    cases.emplace_back(load_arrangement_or_plan(args.pred_paths[i]),
                       load_ground_truth(args.gt_paths[i]));
  }

  const BatchSummary summary = batch_eval(cases);
  const fs::path out_path = fs::path(global.out) / "eval.json";
  write_json_file(out_path, batch_summary_to_json(summary));

  std::cout << std::fixed << std::setprecision(4);
  for (std::size_t i = 0; i < summary.cases.size(); ++i) {
    const EvalReport& report = summary.cases[i];
    std::cout << "case " << i + 1 << " (" << cases[i].second.scene_ref
              << "): accuracy " << report.object_accuracy << ", jaccard " << report.jaccard
              << '\n';
    for (const auto& row : report.per_object) {
      std::cout << "  " << (row.match ? "=" : "x") << ' ' << row.object_id << ": "
                << row.predicted_receptacle << " vs " << row.gt_receptacle << '\n';
    }
  }
  std::cout << "mean accuracy: " << summary.mean << " +/- " << summary.stdev
            << " (population stdev over " << summary.cases.size() << " cases)\n"
            << "wrote " << out_path.string() << '\n';
  return 0;
}

struct ExactArgs {
  std::string scene_path;
  std::string bundle_path;
};

int cmd_exact(const GlobalOptions& global, const ExactArgs& args) {
  const SceneDescription scene = load_scene(args.scene_path);
  const PriorBundle bundle = load_bundle(args.bundle_path);
  const auto [arrangement, best_reward] = solve_exact(scene, bundle);

  Json doc;
  doc["reward"] = best_reward;
  doc["arrangement"] = arrangement_to_json(arrangement);
  const fs::path out_path = fs::path(global.out) / "exact.json";
  write_json_file(out_path, doc);

  std::cout << std::setprecision(17) << "exact optimum reward: " << best_reward << '\n'
            << "wrote " << out_path.string() << '\n';
  return 0;
}

struct RenderArgs {
  std::string scene_path;
  std::string arrangement_path;
  std::string format = "both";
};

int cmd_render(const GlobalOptions& global, const RenderArgs& args) {
  const SceneDescription scene = load_scene(args.scene_path);
  const Arrangement arrangement = load_arrangement_or_plan(args.arrangement_path);
  const Validity verdict = validate_arrangement(scene, arrangement);
  if (!verdict.ok) {
    std::cerr << "note: arrangement has " << verdict.violations.size()
              << " constraint violation(s); rendering anyway\n";
  }

  const fs::path out_dir(global.out);
  if (args.format == "ascii" || args.format == "both") {
    const std::string text = render_ascii(scene, arrangement);
    write_text_file(out_dir / "render.txt", text);
    std::cout << text;
  }
  if (args.format == "svg" || args.format == "both") {
    write_text_file(out_dir / "render.svg", render_svg(scene, arrangement));
    std::cout << "wrote " << (out_dir / "render.svg").string() << '\n';
  }
  if (args.format != "ascii" && args.format != "svg" && args.format != "both")
    fail(ErrorCode::usage, "--format must be ascii, svg or both");
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  GlobalOptions global;
  CLI::App app{"Preference-aware household arrangement planner"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--seed", global.seed, "Planner RNG seed")->capture_default_str();
  app.add_option("--iterations", global.iterations, "Search iterations")
      ->capture_default_str();
  app.add_option("--exploration-c", global.exploration_c, "UCB exploration constant")
      ->capture_default_str();
  app.add_flag("--offline", global.offline, "Forbid any network use");
  app.add_option("--out", global.out, "Output directory")->capture_default_str();

  EstimateArgs estimate;
  CLI::App* sub_estimate =
      app.add_subcommand("estimate-priors", "Estimate a prior bundle from demonstrations");
  sub_estimate->add_option("--scene", estimate.scene_path, "Scene file")->required();
  sub_estimate->add_option("--demos", estimate.demos_path, "Demonstration file")->required();
  sub_estimate->add_option("--likert", estimate.likert_path,
                           "Questionnaire response file for the weights");
  sub_estimate->add_option("--weights", estimate.weights_csv,
                           "Explicit weights w1,w2,w3,w4 (overrides the uniform default)");
  sub_estimate
      ->add_option("--commonsense", estimate.commonsense_path,
                   "Commonsense table rows from fetch-commonsense or a stub fixture")
      ->required();

  FetchArgs fetch;
  CLI::App* sub_fetch =
      app.add_subcommand("fetch-commonsense", "Acquire the commonsense prior table");
  sub_fetch->add_option("--scene", fetch.scene_path, "Scene file")->required();
  sub_fetch->add_option("--backend", fetch.backend, "stub or remote")
      ->capture_default_str();
  sub_fetch->add_option("--stub", fetch.stub_path, "Stub fixture file");
  sub_fetch->add_option("--cache", fetch.cache_path,
                        "Cache file (default <out>/oracle_cache.json)");
  sub_fetch->add_option("--oracle-config", fetch.oracle_config_path,
                        "Restricted config file holding endpoint and credential");
  sub_fetch->add_option("--retries", fetch.retries, "Retries per pair")
      ->capture_default_str();
  sub_fetch->add_option("--concurrency", fetch.concurrency, "Concurrent fetches")
      ->capture_default_str();
  sub_fetch->add_flag("--debug-oracle", fetch.debug,
                      "Log request/response bodies (credential redacted)");

  PlanArgs plan_args;
  CLI::App* sub_plan = app.add_subcommand("plan", "Search for the best arrangement");
  sub_plan->add_option("--scene", plan_args.scene_path, "Scene file")->required();
  sub_plan->add_option("--bundle", plan_args.bundle_path, "Prior bundle file")->required();
  sub_plan->add_option("--trees", plan_args.trees, "Independent root-parallel trees")
      ->capture_default_str();
  sub_plan->add_flag("--oracle", plan_args.exact,
                     "Solve exactly by enumeration instead of searching");
  sub_plan->add_flag("--quiet", plan_args.quiet, "Suppress the per-step breakdown");

  EvalArgs eval_args;
  CLI::App* sub_eval =
      app.add_subcommand("eval", "Score predictions against ground-truth assignments");
  sub_eval->add_option("--pred", eval_args.pred_paths,
                       "Prediction files (arrangements or plan results)");
  sub_eval->add_option("--gt", eval_args.gt_paths, "Ground-truth files");

  ExactArgs exact_args;
  CLI::App* sub_exact =
      app.add_subcommand("oracle", "Exact brute-force optimum for small scenes");
  sub_exact->add_option("--scene", exact_args.scene_path, "Scene file")->required();
  sub_exact->add_option("--bundle", exact_args.bundle_path, "Prior bundle file")->required();

  RenderArgs render_args;
  CLI::App* sub_render = app.add_subcommand("render", "Draw an arrangement");
  sub_render->add_option("--scene", render_args.scene_path, "Scene file")->required();
  sub_render->add_option("--arrangement", render_args.arrangement_path,
                         "Arrangement or plan result file")
      ->required();
  sub_render->add_option("--format", render_args.format, "ascii, svg or both")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (app.got_subcommand(sub_estimate)) return cmd_estimate_priors(global, estimate);
    if (app.got_subcommand(sub_fetch)) return cmd_fetch_commonsense(global, fetch);
    if (app.got_subcommand(sub_plan)) return cmd_plan(global, plan_args);
    if (app.got_subcommand(sub_eval)) return cmd_eval(global, eval_args);
    if (app.got_subcommand(sub_exact)) return cmd_exact(global, exact_args);
    if (app.got_subcommand(sub_render)) return cmd_render(global, render_args);
  } catch (const Error& e) {
    std::cerr << "error[" << error_code_name(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace tidyplan
