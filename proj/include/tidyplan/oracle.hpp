#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "tidyplan/constructs.hpp"
#include "tidyplan/scene.hpp"

namespace tidyplan {

// Bump whenever build_prompt changes so stale cache entries stop matching.
inline constexpr const char* kPromptVersion = "v1";

struct OracleResponse {
  std::string object_id;
  std::string receptacle_id;
  double score = 0.0;
  std::string rationale;
  std::string raw;  // verbatim model output, kept for audit
};

// One prompt in, raw model text out. Implementations throw Error with
// ErrorCode::transport when delivery fails.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

struct RemoteEndpoint {
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4";
  std::string credential;  // bearer token; must never reach any log
  int timeout_seconds = 30;
  bool debug_log = false;
};

// Chat-completion POST over httplib. Honors TIDYPLAN_FORBID_NETWORK by
// failing before any connection is opened.
std::unique_ptr<ChatTransport> make_http_transport(const RemoteEndpoint& endpoint);

// Endpoint from TIDYPLAN_ORACLE_ENDPOINT / TIDYPLAN_ORACLE_MODEL with the
// credential taken from TIDYPLAN_ORACLE_KEY.
RemoteEndpoint endpoint_from_environment();

// Endpoint from a JSON config file holding the credential. The file must not
// be readable or writable by group or others.
RemoteEndpoint endpoint_from_config_file(const std::filesystem::path& config_path);

// Persistent per-pair response store. Entries are immutable once written; a
// file-backed cache rewrites its file after every insert.
class PriorCache {
 public:
  PriorCache() = default;  // memory only
  static PriorCache open(const std::filesystem::path& file);

  const OracleResponse* find(const std::string& scene_id, const std::string& object_id,
                             const std::string& receptacle_id,
                             const std::string& prompt_version) const;
  // No-op returning false when the key already exists.
  bool insert(const std::string& scene_id, const std::string& prompt_version,
              const OracleResponse& response);
  std::size_t size() const { return entries_.size(); }

 private:
  struct Key {
    std::string scene_id;
    std::string object_id;
    std::string receptacle_id;
    std::string prompt_version;
    bool operator<(const Key& other) const;
  };
  std::map<Key, OracleResponse> entries_;
  std::filesystem::path file_;

  void save() const;
};

// Deterministic rating prompt embedding a JSON scene graph and the pair under
// query. Identical inputs produce byte-identical text.
std::string build_prompt(const SceneDescription& scene, const std::string& object_id,
                         const std::string& receptacle_id);

// Extracts the first decimal following a "score:" marker and clamps it to
// [0, 1]. Throws ErrorCode::oracle_parse when no such value exists.
double parse_score_reply(const std::string& raw);

struct OracleConfig {
  enum class Backend { remote, stub };
  Backend backend = Backend::stub;
  std::filesystem::path stub_fixture;  // rows in the bundle commonsense format
  RemoteEndpoint endpoint;
  int max_retries = 3;   // attempts beyond the first
  int backoff_ms = 250;  // doubled per retry
  int concurrency = 4;
  std::string prompt_version = kPromptVersion;
};

// Full object x receptacle table. The stub backend reads scores from the
// fixture file and never constructs a transport; the remote backend consults
// the cache first and queries only the missing pairs. Passing a transport
// overrides the HTTP one (used by tests).
CommonsensePriorTable fetch_table(const SceneDescription& scene, const OracleConfig& cfg,
                                  PriorCache& cache, ChatTransport* transport = nullptr);

}  // namespace tidyplan
