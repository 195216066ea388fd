#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "tmkbench/extract.hpp"

namespace tmkbench::gateway {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{500};  // doubled per retry
};

struct ModelConfig {
  std::string endpoint;        // full chat-completions URL
  std::string model;
  std::string credential_env;  // name of the environment variable holding the key
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::chrono::milliseconds timeout{60000};
  RetryPolicy retry;
};

struct TransportError {
  enum class Kind { Auth, RateLimited, Network, Timeout, BadResponse };

  TransportError() = default;
  TransportError(Kind k, std::string d, int s = 0) : kind(k), detail(std::move(d)), status(s) {}

  Kind kind = Kind::Network;
  std::string detail;
  int status = 0;
  std::optional<std::chrono::seconds> retry_after;

  std::string class_name() const;
};

using CompletionResult = std::variant<extract::RawResponse, TransportError>;

/// Caps in-flight remote requests process-wide (default 4).
void set_request_limit(int max_in_flight);

/// One chat-completion endpoint or one of the offline mock responders.
/// Mocks are pure: no I/O, deterministic given their inputs (and seed).
class Responder {
 public:
  static Responder remote(ModelConfig config);
  /// Parses the queried statement out of the prompt, solves it, and answers
  /// with a tagged optimal plan.
  static Responder oracle();
  /// Returns the prompt's demonstration plan verbatim.
  static Responder echo_demo();
  /// Returns the demonstration plan with two adjacent actions swapped.
  static Responder scramble(std::uint64_t seed);

  CompletionResult complete(const std::string& system_prompt,
                            const std::string& user_prompt) const;

  bool is_remote() const { return kind_ == Kind::Remote; }
  std::string describe() const;

 private:
  enum class Kind { Remote, Oracle, EchoDemo, Scramble };
  Kind kind_ = Kind::Oracle;
  ModelConfig config_;
  std::uint64_t seed_ = 0;
};

/// Builds a responder from its config-file name: "remote", "oracle",
/// "echo-demo", "scramble".
std::optional<Responder> responder_from_name(const std::string& name, const ModelConfig& config,
                                             std::uint64_t seed);

}  // namespace tmkbench::gateway
