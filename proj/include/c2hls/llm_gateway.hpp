#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"

#include "c2hls/util.hpp"

namespace c2hls {

struct Message {
  std::string role;  // system | user | assistant
  std::string text;
};
using Request = std::vector<Message>;

struct PromptExchange {
  Request request;
  std::string model_id;
  std::string response_text;
  long input_tokens = 0;
  long output_tokens = 0;
  std::string request_digest;
};

// Deterministic join key over (model_id, request).
inline std::string request_digest(const std::string& model_id, const Request& req) {
  std::string canon = model_id;
  canon.push_back('\x1f');
  for (const auto& m : req) {
    canon += m.role;
    canon.push_back('\x1e');
    canon += m.text;
    canon.push_back('\x1d');
  }
  return digest_hex(canon);
}

// ---------------------------------------------------------------------------
// model escalation policy

struct ModelPolicy {
  std::vector<std::string> ladder;  // cheap -> expensive
  int escalation_threshold = 3;
  int failures_at_current = 0;
  int rung = 0;
};

inline const std::string& select_model(const ModelPolicy& policy) {
  if (policy.ladder.empty()) throw std::runtime_error("model ladder is empty");
  int r = std::min<int>(policy.rung, static_cast<int>(policy.ladder.size()) - 1);
  return policy.ladder[static_cast<size_t>(r)];
}

inline void record_failure(ModelPolicy& policy) {
  ++policy.failures_at_current;
  if (policy.failures_at_current >= policy.escalation_threshold) {
    if (policy.rung + 1 < static_cast<int>(policy.ladder.size())) ++policy.rung;
    policy.failures_at_current = 0;
  }
}

inline void record_success(ModelPolicy& policy) {
  policy.failures_at_current = 0;  // the rung never demotes
}

// ---------------------------------------------------------------------------
// usage accounting

struct TokenRate {
  double input_per_token = 0.0;
  double output_per_token = 0.0;
};

struct UsageLedger {
  struct Entry {
    long prompts = 0;
    long input_tokens = 0;
    long output_tokens = 0;
  };
  std::map<std::string, Entry> per_model;
  std::map<std::string, TokenRate> rates;

  void add(const PromptExchange& e) {
    Entry& ent = per_model[e.model_id];
    ent.prompts += 1;
    ent.input_tokens += e.input_tokens;
    ent.output_tokens += e.output_tokens;
  }

  Entry totals() const {
    Entry t;
    for (const auto& [model, e] : per_model) {
      t.prompts += e.prompts;
      t.input_tokens += e.input_tokens;
      t.output_tokens += e.output_tokens;
    }
    return t;
  }

  double cost() const {
    double c = 0.0;
    for (const auto& [model, e] : per_model) {
      auto it = rates.find(model);
      if (it == rates.end()) continue;
      c += e.input_tokens * it->second.input_per_token +
           e.output_tokens * it->second.output_per_token;
    }
    return c;
  }
};

// ---------------------------------------------------------------------------
// backends

struct BackendError : std::runtime_error {
  int status;
  std::string body;
  BackendError(int status_, const std::string& body_)
      : std::runtime_error("backend error (status " + std::to_string(status_) + "): " + body_),
        status(status_),
        body(body_) {}
};

struct ReplayMiss : std::runtime_error {
  std::string digest;
  explicit ReplayMiss(const std::string& d)
      : std::runtime_error("replay transcript has no entry for digest " + d), digest(d) {}
};

struct BackendConfig {
  std::string kind = "replay";  // "live" | "replay"
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string auth_env = "C2HLS_API_KEY";
  std::map<std::string, std::string> model_map;  // ladder id -> provider id
  std::map<std::string, TokenRate> rates;
  std::string transcript_path;  // read for replay, appended for live
  int max_retries = 3;
  std::vector<int> backoff_seconds = {1, 4, 16};
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual PromptExchange complete(const Request& req, const std::string& model_id) = 0;
  virtual bool deterministic() const { return false; }
};

// ---- transcript store (JSON lines, request_digest as join key) ----

inline nlohmann::ordered_json exchange_to_json(const PromptExchange& e) {
  nlohmann::ordered_json j;
  j["request_digest"] = e.request_digest;
  j["model_id"] = e.model_id;
  nlohmann::ordered_json req = nlohmann::ordered_json::array();
  for (const auto& m : e.request) req.push_back({{"role", m.role}, {"text", m.text}});
  j["request"] = req;
  j["response_text"] = e.response_text;
  j["input_tokens"] = e.input_tokens;
  j["output_tokens"] = e.output_tokens;
  return j;
}

inline PromptExchange exchange_from_json(const nlohmann::json& j) {
  PromptExchange e;
  e.request_digest = j.value("request_digest", "");
  e.model_id = j.value("model_id", "");
  if (j.contains("request")) {
    for (const auto& m : j["request"])
      e.request.push_back({m.value("role", ""), m.value("text", "")});
  }
  e.response_text = j.value("response_text", "");
  e.input_tokens = j.value("input_tokens", 0L);
  e.output_tokens = j.value("output_tokens", 0L);
  return e;
}

inline std::vector<PromptExchange> load_transcript(const std::filesystem::path& path) {
  std::vector<PromptExchange> out;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open transcript: " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    out.push_back(exchange_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

class ReplayBackend : public Backend {
 public:
  explicit ReplayBackend(const std::filesystem::path& transcript_path) {
    for (auto& e : load_transcript(transcript_path)) store_[e.request_digest] = std::move(e);
  }
  explicit ReplayBackend(std::vector<PromptExchange> exchanges) {
    for (auto& e : exchanges) store_[e.request_digest] = std::move(e);
  }

  PromptExchange complete(const Request& req, const std::string& model_id) override {
    std::string digest = request_digest(model_id, req);
    auto it = store_.find(digest);
    if (it == store_.end()) throw ReplayMiss(digest);
    return it->second;
  }

  bool deterministic() const override { return true; }

 private:
  std::map<std::string, PromptExchange> store_;
};

// ---------------------------------------------------------------------------
// gateway: ledger + transcript recording around a backend

class Gateway {
 public:
  Gateway(Backend& backend, std::map<std::string, TokenRate> rates = {},
          std::optional<std::filesystem::path> record_path = std::nullopt)
      : backend_(backend) {
    ledger_.rates = std::move(rates);
    if (record_path && !backend.deterministic()) {
      std::filesystem::create_directories(record_path->parent_path());
      record_.open(*record_path, std::ios::app);
    }
  }

  PromptExchange complete(const Request& req, const ModelPolicy& policy) {
    if (req.empty()) throw std::invalid_argument("request must be non-empty");
    if (req.front().role != "system")
      throw std::invalid_argument("first message must have role system");
    const std::string& model = select_model(policy);
    PromptExchange e = backend_.complete(req, model);
    e.request = req;
    e.model_id = model;
    e.request_digest = request_digest(model, req);
    ledger_.add(e);
    if (record_.is_open()) {
      record_ << exchange_to_json(e).dump() << "\n";
      record_.flush();
    }
    return e;
  }

  const UsageLedger& ledger() const { return ledger_; }
  UsageLedger& ledger() { return ledger_; }

 private:
  Backend& backend_;
  UsageLedger ledger_;
  std::ofstream record_;
};

}  // namespace c2hls

// The live backend is only compiled into binaries that opt in: httplib is a
// heavy include and needs OpenSSL for https endpoints.
#ifdef C2HLS_ENABLE_HTTP
#ifdef C2HLS_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

namespace c2hls {

// OpenAI-style chat-completions endpoint. Transport failures and 5xx are
// retried with the configured backoff; provider content errors are not.
class LiveHttpBackend : public Backend {
 public:
  explicit LiveHttpBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {}

  PromptExchange complete(const Request& req, const std::string& model_id) override;

 private:
  BackendConfig cfg_;
};

inline PromptExchange LiveHttpBackend::complete(const Request& req,
                                                const std::string& model_id) {
  std::string provider_model = model_id;
  auto mapped = cfg_.model_map.find(model_id);
  if (mapped != cfg_.model_map.end()) provider_model = mapped->second;

  nlohmann::json body;
  body["model"] = provider_model;
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : req) messages.push_back({{"role", m.role}, {"content", m.text}});
  body["messages"] = messages;

  // split endpoint into host and path
  std::string url = cfg_.endpoint;
  std::string scheme_host = url, path = "/";
  size_t scheme = url.find("://");
  size_t slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash != std::string::npos) {
    scheme_host = url.substr(0, slash);
    path = url.substr(slash);
  }

  const char* key = std::getenv(cfg_.auth_env.c_str());
  httplib::Headers headers = {{"Authorization", std::string("Bearer ") + (key ? key : "")}};

  int attempts = 0;
  while (true) {
    httplib::Client client(scheme_host);
    client.set_read_timeout(120, 0);
    auto res = client.Post(path, headers, body.dump(), "application/json");
    bool transport_fail = !res;
    bool server_fail = res && res->status >= 500;
    if (!transport_fail && !server_fail) {
      if (res->status != 200) throw BackendError(res->status, res->body);
      nlohmann::json parsed = nlohmann::json::parse(res->body);
      PromptExchange e;
      e.response_text = parsed["choices"][0]["message"]["content"].get<std::string>();
      e.input_tokens = parsed["usage"].value("prompt_tokens", 0L);
      e.output_tokens = parsed["usage"].value("completion_tokens", 0L);
      return e;
    }
    if (attempts >= cfg_.max_retries)
      throw BackendError(res ? res->status : 0, res ? res->body : "transport failure");
    int delay = attempts < static_cast<int>(cfg_.backoff_seconds.size())
                    ? cfg_.backoff_seconds[static_cast<size_t>(attempts)]
                    : cfg_.backoff_seconds.empty() ? 1 : cfg_.backoff_seconds.back();
    ::sleep(static_cast<unsigned>(delay));
    ++attempts;
  }
}

}  // namespace c2hls
#endif  // C2HLS_ENABLE_HTTP
