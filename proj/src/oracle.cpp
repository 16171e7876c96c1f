#include "tidyplan/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <thread>
#include <tuple>
#include <vector>

#include "httplib.h"
#include "tidyplan/error.hpp"
#include "tidyplan/json_io.hpp"

namespace tidyplan {

namespace {

std::string trimmed(const std::string& text) {
  std::size_t lo = 0;
  std::size_t hi = text.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(text[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(text[hi - 1]))) --hi;
  return text.substr(lo, hi - lo);
}

// Returns the clamped score and sets *value_end to the index just past the
// parsed number, for rationale extraction.
double parse_score_at(const std::string& raw, std::size_t* value_end) {
  std::string lower(raw.size(), '\0');
  std::transform(raw.begin(), raw.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  std::size_t at = lower.find("score");
  while (at != std::string::npos) {
    std::size_t i = at + 5;
    while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
    if (i < raw.size() && raw[i] == ':') {
      for (std::size_t j = i + 1; j < raw.size(); ++j) {
        const char c = raw[j];
        if ((c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+') {
          const char* start = raw.c_str() + j;
          char* end = nullptr;
          const double value = std::strtod(start, &end);
          if (end != start && std::isfinite(value)) {
            if (value_end != nullptr)
              *value_end = static_cast<std::size_t>(end - raw.c_str());
            return std::clamp(value, 0.0, 1.0);
          }
        }
      }
    }
    at = lower.find("score", at + 1);
  }
  fail(ErrorCode::oracle_parse, "reply contains no 'score:' line with a decimal value");
}

class HttpChatTransport final : public ChatTransport {
 public:
  explicit HttpChatTransport(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    if (endpoint_.base_url.empty())
      fail(ErrorCode::config, "remote oracle endpoint URL is empty");
    if (endpoint_.credential.empty())
      fail(ErrorCode::config, "remote oracle credential is empty");
  }

  std::string complete(const std::string& prompt) override {
    if (const char* forbid = std::getenv("TIDYPLAN_FORBID_NETWORK");
        forbid != nullptr && *forbid != '\0')
      fail(ErrorCode::transport, "network use is disabled by TIDYPLAN_FORBID_NETWORK");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (endpoint_.base_url.rfind("https://", 0) == 0)
      fail(ErrorCode::transport, "built without TLS support; use an http:// endpoint");
#endif

    Json body;
    body["model"] = endpoint_.model;
    body["messages"] =
        Json::array({Json{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = 0;
    const std::string payload = body.dump();

    debug("POST " + endpoint_.base_url + endpoint_.path + " authorization=Bearer *** body=" +
          payload);

    // One client per call keeps this safe under the concurrent fetch pool.
    httplib::Client client(endpoint_.base_url);
    client.set_connection_timeout(endpoint_.timeout_seconds, 0);
    client.set_read_timeout(endpoint_.timeout_seconds, 0);
    client.set_default_headers({{"Authorization", "Bearer " + endpoint_.credential}});

    auto res = client.Post(endpoint_.path, payload, "application/json");
    if (!res)
      fail(ErrorCode::transport, "no response from '" + endpoint_.base_url +
                                     "': " + httplib::to_string(res.error()));
    debug("status " + std::to_string(res->status) + " body=" + res->body);
    if (res->status != 200)
      fail(ErrorCode::transport,
           "oracle endpoint returned status " + std::to_string(res->status));

    try {
      const Json reply = Json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::oracle_parse,
           std::string("malformed chat-completion response: ") + e.what());
    }
  }

 private:
  RemoteEndpoint endpoint_;

  void debug(const std::string& text) const {
    if (!endpoint_.debug_log) return;
    std::string line = text;
    // The credential must never reach the log, wherever it shows up.
    if (!endpoint_.credential.empty()) {
      std::size_t at = 0;
      while ((at = line.find(endpoint_.credential, at)) != std::string::npos)
        line.replace(at, endpoint_.credential.size(), "***");
    }
    std::cerr << "[oracle] " << line << '\n';
  }
};

}  // namespace

std::unique_ptr<ChatTransport> make_http_transport(const RemoteEndpoint& endpoint) {
  return std::make_unique<HttpChatTransport>(endpoint);
}

RemoteEndpoint endpoint_from_environment() {
  RemoteEndpoint endpoint;
  const char* url = std::getenv("TIDYPLAN_ORACLE_ENDPOINT");
  if (url == nullptr || *url == '\0')
    fail(ErrorCode::config, "TIDYPLAN_ORACLE_ENDPOINT is not set");
  endpoint.base_url = url;
  if (const char* model = std::getenv("TIDYPLAN_ORACLE_MODEL"); model != nullptr)
    endpoint.model = model;
  if (const char* path = std::getenv("TIDYPLAN_ORACLE_PATH"); path != nullptr)
    endpoint.path = path;
  const char* key = std::getenv("TIDYPLAN_ORACLE_KEY");
  if (key == nullptr || *key == '\0')
    fail(ErrorCode::config,
         "TIDYPLAN_ORACLE_KEY is not set; the credential comes from the environment or a "
         "restricted config file, never from the command line");
  endpoint.credential = key;
  return endpoint;
}

RemoteEndpoint endpoint_from_config_file(const std::filesystem::path& config_path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::file_status status = fs::status(config_path, ec);
  if (ec || !fs::exists(status))
    fail(ErrorCode::io, "oracle config '" + config_path.string() + "' does not exist");
  constexpr fs::perms kForbidden = fs::perms::group_read | fs::perms::group_write |
                                   fs::perms::others_read | fs::perms::others_write;
  if ((status.permissions() & kForbidden) != fs::perms::none)
    fail(ErrorCode::config, "oracle config '" + config_path.string() +
                                "' holds a credential and must not be accessible to group "
                                "or others (chmod 600)");

  const Json doc = read_json_file(config_path);
  RemoteEndpoint endpoint;
  if (!doc.is_object() || !doc.contains("endpoint") || !doc["endpoint"].is_string())
    fail(ErrorCode::config,
         "oracle config '" + config_path.string() + "' needs a string field 'endpoint'");
  endpoint.base_url = doc["endpoint"].get<std::string>();
  if (!doc.contains("credential") || !doc["credential"].is_string() ||
      doc["credential"].get<std::string>().empty())
    fail(ErrorCode::config,
         "oracle config '" + config_path.string() + "' needs a non-empty 'credential'");
  endpoint.credential = doc["credential"].get<std::string>();
  if (doc.contains("model") && doc["model"].is_string())
    endpoint.model = doc["model"].get<std::string>();
  if (doc.contains("path") && doc["path"].is_string())
    endpoint.path = doc["path"].get<std::string>();
  if (doc.contains("timeout_seconds") && doc["timeout_seconds"].is_number_integer())
    endpoint.timeout_seconds = doc["timeout_seconds"].get<int>();
  return endpoint;
}

bool PriorCache::Key::operator<(const Key& other) const {
  return std::tie(scene_id, object_id, receptacle_id, prompt_version) <
         std::tie(other.scene_id, other.object_id, other.receptacle_id,
                  other.prompt_version);
}

PriorCache PriorCache::open(const std::filesystem::path& file) {
  PriorCache cache;
  cache.file_ = file;
  if (!std::filesystem::exists(file)) return cache;

  const Json doc = read_json_file(file);
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
    fail(ErrorCode::parse, file.string() + ": expected an object with an 'entries' array");
  for (const auto& je : doc["entries"]) {
    Key key{je.at("scene_id").get<std::string>(), je.at("object_id").get<std::string>(),
            je.at("receptacle_id").get<std::string>(),
            je.at("prompt_version").get<std::string>()};
    OracleResponse response;
    response.object_id = key.object_id;
    response.receptacle_id = key.receptacle_id;
    response.score = je.at("score").get<double>();
    response.rationale = je.value("rationale", std::string{});
    response.raw = je.value("raw", std::string{});
    cache.entries_.emplace(std::move(key), std::move(response));
  }
  return cache;
}

const OracleResponse* PriorCache::find(const std::string& scene_id,
                                       const std::string& object_id,
                                       const std::string& receptacle_id,
                                       const std::string& prompt_version) const {
  const auto it = entries_.find(Key{scene_id, object_id, receptacle_id, prompt_version});
  return it == entries_.end() ? nullptr : &it->second;
}

bool PriorCache::insert(const std::string& scene_id, const std::string& prompt_version,
                        const OracleResponse& response) {
  Key key{scene_id, response.object_id, response.receptacle_id, prompt_version};
  const auto [it, added] = entries_.emplace(std::move(key), response);
  (void)it;
  if (added && !file_.empty()) save();
  return added;
}

void PriorCache::save() const {
  Json entries = Json::array();
  for (const auto& [key, response] : entries_) {
    Json je;
    je["scene_id"] = key.scene_id;
    je["object_id"] = key.object_id;
    je["receptacle_id"] = key.receptacle_id;
    je["prompt_version"] = key.prompt_version;
    je["score"] = response.score;
    je["rationale"] = response.rationale;
    je["raw"] = response.raw;
    entries.push_back(std::move(je));
  }
  Json doc;
  doc["entries"] = std::move(entries);
  write_json_file(file_, doc);
}

std::string build_prompt(const SceneDescription& scene, const std::string& object_id,
                         const std::string& receptacle_id) {
  const ObjectSpec* obj = scene.find_object(object_id);
  if (obj == nullptr) fail(ErrorCode::reference, "unknown object '" + object_id + "'");
  const ReceptacleSpec* rec = scene.find_receptacle(receptacle_id);
  if (rec == nullptr)
    fail(ErrorCode::reference, "unknown receptacle '" + receptacle_id + "'");

  Json graph;
  graph["room"] = scene.id();
  Json objects = Json::array();
  for (const auto& o : scene.objects())
    objects.push_back(Json{{"id", o.id}, {"name", o.name}});
  graph["objects"] = std::move(objects);
  Json receptacles = Json::array();
  for (const auto& r : scene.receptacles())
    receptacles.push_back(Json{{"id", r.id}, {"name", r.name}});
  graph["receptacles"] = std::move(receptacles);
  graph["query"] = Json{{"object_id", object_id}, {"receptacle_id", receptacle_id}};

  return "You rate how appropriate it is to keep a household object on a receptacle.\n"
         "Scene graph:\n" +
         graph.dump(2) + "\n" + "How appropriate is it to keep \"" + obj->name + "\" (id " +
         object_id + ") on \"" + rec->name + "\" (id " + receptacle_id +
         ")?\n"
         "Reply with a single line of the form\n"
         "score: <decimal between 0 and 1>\n";
}

double parse_score_reply(const std::string& raw) { return parse_score_at(raw, nullptr); }

namespace {

OracleResponse fetch_one(const SceneDescription& scene, const OracleConfig& cfg,
                         ChatTransport& transport, const std::string& object_id,
                         const std::string& receptacle_id) {
  const std::string prompt = build_prompt(scene, object_id, receptacle_id);
  for (int attempt = 0;; ++attempt) {
    try {
      const std::string raw = transport.complete(prompt);
      std::size_t value_end = 0;
      OracleResponse response;
      response.object_id = object_id;
      response.receptacle_id = receptacle_id;
      response.score = parse_score_at(raw, &value_end);
      response.rationale = trimmed(raw.substr(value_end));
      response.raw = raw;
      return response;
    } catch (const Error& e) {
      if (attempt >= cfg.max_retries) {
        if (e.code() == ErrorCode::oracle_parse)
          fail(ErrorCode::oracle_parse, "oracle reply for ('" + object_id + "', '" +
                                            receptacle_id + "') unparsable after " +
                                            std::to_string(attempt + 1) +
                                            " attempts: " + e.what());
        throw;
      }
      if (cfg.backoff_ms > 0)
        std::this_thread::sleep_for(
            std::chrono::milliseconds(static_cast<long long>(cfg.backoff_ms) << attempt));
    }
  }
}

}  // namespace

CommonsensePriorTable fetch_table(const SceneDescription& scene, const OracleConfig& cfg,
                                  PriorCache& cache, ChatTransport* transport) {
  if (cfg.backend == OracleConfig::Backend::stub) {
    if (cfg.stub_fixture.empty())
      fail(ErrorCode::config, "stub oracle backend needs a fixture file");
    CommonsensePriorTable table = load_commonsense(cfg.stub_fixture);
    table.validate_coverage(scene);
    return table;
  }

  // Pairs in (object id, receptacle id) order; the result is independent of
  // fetch completion order.
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& o : scene.objects())
    for (const auto& r : scene.receptacles()) pairs.emplace_back(o.id, r.id);
  std::sort(pairs.begin(), pairs.end());

  CommonsensePriorTable table;
  table.set_provenance(cfg.endpoint.model.empty() ? "remote" : cfg.endpoint.model);

  std::vector<std::pair<std::string, std::string>> missing;
  for (const auto& [object_id, receptacle_id] : pairs) {
    const OracleResponse* hit =
        cache.find(scene.id(), object_id, receptacle_id, cfg.prompt_version);
    if (hit != nullptr)
      table.set(object_id, receptacle_id, hit->score);
    else
      missing.push_back({object_id, receptacle_id});
  }

  if (!missing.empty()) {
    std::unique_ptr<ChatTransport> owned;
    if (transport == nullptr) {
      owned = make_http_transport(cfg.endpoint);
      transport = owned.get();
    }

    std::vector<OracleResponse> fetched(missing.size());
    std::vector<std::exception_ptr> failures(missing.size());
    std::atomic<std::size_t> next{0};
    const int workers = std::clamp<int>(cfg.concurrency, 1,
                                        static_cast<int>(missing.size()));
    auto drain = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= missing.size()) return;
        try {
          fetched[i] = fetch_one(scene, cfg, *transport, missing[i].first,
                                 missing[i].second);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (auto& t : pool) t.join();

    // First failure in pair order wins, so errors are deterministic too.
    for (const auto& failure : failures)
      if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < missing.size(); ++i) {
      cache.insert(scene.id(), cfg.prompt_version, fetched[i]);
      table.set(fetched[i].object_id, fetched[i].receptacle_id, fetched[i].score);
    }
  }

  table.validate_coverage(scene);
  return table;
}

}  // namespace tidyplan
