#include "tmkbench/gateway.hpp"

#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "tmkbench/oracle.hpp"
#include "tmkbench/text.hpp"

namespace tmkbench::gateway {

using extract::RawResponse;

std::string TransportError::class_name() const {
  switch (kind) {
    case Kind::Auth: return "AuthError";
    case Kind::RateLimited: return "RateLimited";
    case Kind::Network: return "TransportError";
    case Kind::Timeout: return "Timeout";
    case Kind::BadResponse: return "BadResponse";
  }
  return "TransportError";
}

namespace {

// Process-wide in-flight cap for remote requests.
class RequestLimiter {
 public:
  void set_limit(int n) {
    std::lock_guard lock(mu_);
    limit_ = n > 0 ? n : 1;
    cv_.notify_all();
  }
  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < limit_; });
    ++in_flight_;
  }
  void release() {
    std::lock_guard lock(mu_);
    --in_flight_;
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int limit_ = 4;
  int in_flight_ = 0;
};

RequestLimiter& limiter() {
  static RequestLimiter instance;
  return instance;
}

struct ParsedUrl {
  bool https = false;
  std::string host_port;  // "host" or "host:port"
  std::string path;
};

std::optional<ParsedUrl> parse_url(const std::string& url) {
  ParsedUrl out;
  std::string rest;
  if (url.rfind("https://", 0) == 0) {
    out.https = true;
    rest = url.substr(8);
  } else if (url.rfind("http://", 0) == 0) {
    rest = url.substr(7);
  } else {
    return std::nullopt;
  }
  std::size_t slash = rest.find('/');
  out.host_port = rest.substr(0, slash);
  out.path = slash == std::string::npos ? "/" : rest.substr(slash);
  if (out.host_port.empty()) return std::nullopt;
  return out;
}

CompletionResult remote_complete(const ModelConfig& config, const std::string& system_prompt,
                                 const std::string& user_prompt) {
  const char* key = nullptr;
  if (!config.credential_env.empty()) key = std::getenv(config.credential_env.c_str());
  if (!key || *key == '\0') {
    return TransportError{TransportError::Kind::Auth,
                          "credential variable " + config.credential_env + " is not set"};
  }
  auto url = parse_url(config.endpoint);
  if (!url) {
    return TransportError{TransportError::Kind::BadResponse,
                          "endpoint is not an http(s) URL: " + config.endpoint};
  }

  nlohmann::json body;
  body["model"] = config.model;
  body["messages"] = nlohmann::json::array();
  if (!system_prompt.empty()) {
    body["messages"].push_back({{"role", "system"}, {"content", system_prompt}});
  }
  body["messages"].push_back({{"role", "user"}, {"content", user_prompt}});
  body["temperature"] = config.temperature;
  body["max_tokens"] = config.max_output_tokens;
  const std::string payload = body.dump();

  httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};
  TransportError last{TransportError::Kind::Network, "no attempt made"};

  for (int attempt = 0; attempt < std::max(1, config.retry.max_attempts); ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(config.retry.backoff_base * (1 << (attempt - 1)));
    }
    limiter().acquire();
    httplib::Result res = [&] {
      const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
      const time_t tsec = std::max<time_t>(1, seconds.count());
      // the scheme-aware client handles both http and https, ports included
      httplib::Client client((url->https ? "https://" : "http://") + url->host_port);
      client.set_connection_timeout(tsec, 0);
      client.set_read_timeout(tsec, 0);
      return client.Post(url->path, headers, payload, "application/json");
    }();
    limiter().release();

    if (!res) {
      auto err = res.error();
      auto kind = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
                      ? TransportError::Kind::Timeout
                      : TransportError::Kind::Network;
      last = TransportError{kind, httplib::to_string(err)};
      continue;  // retry
    }
    if (res->status == 401 || res->status == 403) {
      return TransportError{TransportError::Kind::Auth, "authorization rejected", res->status};
    }
    if (res->status == 429) {
      last = TransportError{TransportError::Kind::RateLimited, "rate limited", res->status};
      if (res->has_header("Retry-After")) {
        last.retry_after = std::chrono::seconds(
            std::atol(res->get_header_value("Retry-After").c_str()));
      }
      continue;  // retry
    }
    if (res->status >= 500) {
      last = TransportError{TransportError::Kind::Network,
                            "server error " + std::to_string(res->status), res->status};
      continue;  // retry
    }
    if (res->status != 200) {
      return TransportError{TransportError::Kind::BadResponse,
                            "unexpected status " + std::to_string(res->status), res->status};
    }
    try {
      nlohmann::json parsed = nlohmann::json::parse(res->body);
      RawResponse out;
      out.text = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
      out.model = config.model;
      if (parsed.contains("usage")) {
        out.prompt_tokens = parsed["usage"].value("prompt_tokens", 0);
        out.completion_tokens = parsed["usage"].value("completion_tokens", 0);
      }
      return out;
    } catch (const std::exception& e) {
      return TransportError{TransportError::Kind::BadResponse,
                            std::string("malformed completion body: ") + e.what(), res->status};
    }
  }
  return last;
}

// First [PLAN] ... [PLAN END] block of the prompt: the demonstration plan.
std::optional<std::vector<std::string>> demo_plan_lines(const std::string& prompt) {
  std::string low = text::lower(prompt);
  std::size_t open = low.find("[plan]");
  if (open == std::string::npos) return std::nullopt;
  std::size_t begin = open + 6;
  std::size_t end = low.find("[plan end]", begin);
  if (end == std::string::npos) return std::nullopt;
  std::vector<std::string> lines;
  for (auto& line : text::split_lines(prompt.substr(begin, end - begin))) {
    if (!text::trim(line).empty()) lines.emplace_back(text::trim(line));
  }
  return lines;
}

std::string tagged(const std::vector<std::string>& lines) {
  std::string out = "[PLAN]\n";
  for (const auto& l : lines) out += l + "\n";
  out += "[PLAN END]";
  return out;
}

RawResponse mock_response(std::string body, const std::string& prompt) {
  RawResponse out;
  out.text = std::move(body);
  out.model = "mock";
  out.prompt_tokens = static_cast<int>(prompt.size() / 4);
  out.completion_tokens = static_cast<int>(out.text.size() / 4);
  return out;
}

CompletionResult oracle_complete(const std::string& prompt) {
  auto variant = prompts::detect_variant(prompt);
  if (!variant) {
    return TransportError{TransportError::Kind::BadResponse, "cannot detect prompt variant"};
  }
  const vocab::Vocabulary& v = vocab::builtin(*variant);
  auto instance = prompts::parse_last_statement(v, prompt);
  if (!instance) {
    return TransportError{TransportError::Kind::BadResponse, "cannot parse prompt statement"};
  }
  auto solved = oracle::solve_optimal(*instance);
  if (!solved) {
    return mock_response(tagged({}), prompt);
  }
  return mock_response(tagged(prompts::render_plan_lines(v, solved->plan)), prompt);
}

CompletionResult echo_complete(const std::string& prompt) {
  auto lines = demo_plan_lines(prompt);
  return mock_response(tagged(lines.value_or(std::vector<std::string>{})), prompt);
}

CompletionResult scramble_complete(std::uint64_t seed, const std::string& prompt) {
  auto lines = demo_plan_lines(prompt);
  if (!lines || lines->size() < 2) {
    return mock_response(tagged(lines.value_or(std::vector<std::string>{})), prompt);
  }
  std::size_t i = seed % (lines->size() - 1);
  std::swap((*lines)[i], (*lines)[i + 1]);
  return mock_response(tagged(*lines), prompt);
}

}  // namespace

void set_request_limit(int max_in_flight) { limiter().set_limit(max_in_flight); }

Responder Responder::remote(ModelConfig config) {
  Responder r;
  r.kind_ = Kind::Remote;
  r.config_ = std::move(config);
  return r;
}

Responder Responder::oracle() {
  Responder r;
  r.kind_ = Kind::Oracle;
  return r;
}

Responder Responder::echo_demo() {
  Responder r;
  r.kind_ = Kind::EchoDemo;
  return r;
}

Responder Responder::scramble(std::uint64_t seed) {
  Responder r;
  r.kind_ = Kind::Scramble;
  r.seed_ = seed;
  return r;
}

CompletionResult Responder::complete(const std::string& system_prompt,
                                     const std::string& user_prompt) const {
  switch (kind_) {
    case Kind::Remote: return remote_complete(config_, system_prompt, user_prompt);
    case Kind::Oracle: return oracle_complete(user_prompt);
    case Kind::EchoDemo: return echo_complete(user_prompt);
    case Kind::Scramble: return scramble_complete(seed_, user_prompt);
  }
  return TransportError{TransportError::Kind::BadResponse, "unknown responder"};
}

std::string Responder::describe() const {
  switch (kind_) {
    case Kind::Remote: return "remote(" + config_.model + ")";
    case Kind::Oracle: return "oracle";
    case Kind::EchoDemo: return "echo-demo";
    case Kind::Scramble: return "scramble(" + std::to_string(seed_) + ")";
  }
  return "?";
}

std::optional<Responder> responder_from_name(const std::string& name, const ModelConfig& config,
                                             std::uint64_t seed) {
  std::string n = text::lower(name);
  if (n == "remote") return Responder::remote(config);
  if (n == "oracle") return Responder::oracle();
  if (n == "echo-demo" || n == "echo") return Responder::echo_demo();
  if (n == "scramble") return Responder::scramble(seed);
  return std::nullopt;
}

}  // namespace tmkbench::gateway
