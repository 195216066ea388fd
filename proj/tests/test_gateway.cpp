#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "tmkbench/bench.hpp"
#include "tmkbench/gateway.hpp"
#include "tmkbench/oracle.hpp"

using namespace tmkbench;
using gateway::Responder;
using gateway::TransportError;
using prompts::Mode;
using vocab::Variant;

namespace {

std::string one_shot_prompt(Variant variant) {
  prompts::PromptSpec spec;
  spec.variant = variant;
  spec.mode = Mode::PlainOneShot;
  spec.query = prompts::fixed_query(variant);
  spec.demo = prompts::fixed_demo(variant);
  return prompts::assemble_prompt(spec);
}

extract::RawResponse expect_response(const gateway::CompletionResult& r) {
  REQUIRE_MESSAGE(std::holds_alternative<extract::RawResponse>(r),
                  std::get<TransportError>(r).detail);
  return std::get<extract::RawResponse>(r);
}

}  // namespace

TEST_CASE("oracle responder answers with a plan that validates correct") {
  for (auto variant : {Variant::Classic, Variant::Mystery, Variant::Random}) {
    std::string prompt = one_shot_prompt(variant);
    auto response = expect_response(Responder::oracle().complete("", prompt));
    const auto& query = prompts::fixed_query(variant);
    auto plan = extract::extract_plan(vocab::builtin(variant), query, response);
    REQUIRE_FALSE(plan.empty());
    CHECK(bench::judge(query, plan.actions).kind == bench::Verdict::Kind::Correct);
  }
}

TEST_CASE("oracle responder handles zero-shot prompts too") {
  prompts::PromptSpec spec;
  spec.variant = Variant::Mystery;
  spec.mode = Mode::PlainZeroShot;
  spec.query = prompts::fixed_query(Variant::Mystery);
  auto response = expect_response(Responder::oracle().complete("", prompts::assemble_prompt(spec)));
  auto plan =
      extract::extract_plan(vocab::builtin(Variant::Mystery), spec.query, response);
  CHECK(bench::judge(spec.query, plan.actions).kind == bench::Verdict::Kind::Correct);
}

TEST_CASE("echo responder returns the demonstration plan verbatim") {
  std::string prompt = one_shot_prompt(Variant::Classic);
  auto response = expect_response(Responder::echo_demo().complete("", prompt));
  const auto& demo = prompts::fixed_demo(Variant::Classic);
  auto plan = extract::extract_plan(vocab::builtin(Variant::Classic), demo.instance, response);
  CHECK(plan.actions == demo.plan);
}

TEST_CASE("scramble responder breaks the plan for the demo instance") {
  std::string prompt = one_shot_prompt(Variant::Classic);
  auto response = expect_response(Responder::scramble(1).complete("", prompt));
  const auto& demo = prompts::fixed_demo(Variant::Classic);
  auto plan = extract::extract_plan(vocab::builtin(Variant::Classic), demo.instance, response);
  REQUIRE(plan.actions.size() == demo.plan.size());
  CHECK(plan.actions != demo.plan);
  CHECK(bench::judge(demo.instance, plan.actions).kind != bench::Verdict::Kind::Correct);
}

TEST_CASE("mock responders are deterministic") {
  std::string prompt = one_shot_prompt(Variant::Random);
  for (const Responder& r :
       {Responder::oracle(), Responder::echo_demo(), Responder::scramble(5)}) {
    auto a = expect_response(r.complete("", prompt));
    auto b = expect_response(r.complete("", prompt));
    CHECK(a.text == b.text);
  }
}

TEST_CASE("remote with an unset credential fails before any network call") {
  gateway::ModelConfig config;
  config.endpoint = "https://nonexistent.invalid/v1/chat/completions";
  config.model = "m";
  config.credential_env = "TMKBENCH_TEST_UNSET_CREDENTIAL";
  unsetenv("TMKBENCH_TEST_UNSET_CREDENTIAL");
  auto r = Responder::remote(config).complete("", "hello");
  REQUIRE(std::holds_alternative<TransportError>(r));
  CHECK(std::get<TransportError>(r).kind == TransportError::Kind::Auth);
}

TEST_CASE("remote round-trip against a local chat-completions server") {
  std::atomic<int> hits{0};
  httplib::Server server;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    int n = ++hits;
    if (n == 1) {
      res.status = 429;  // first call rate-limited, client must retry
      res.set_header("Retry-After", "1");
      return;
    }
    auto body = nlohmann::json::parse(req.body);
    REQUIRE(body.at("messages").size() == 2);  // system + user
    nlohmann::json reply = {
        {"choices", {{{"message", {{"role", "assistant"}, {"content", "[PLAN]\n[PLAN END]"}}}}}},
        {"usage", {{"prompt_tokens", 12}, {"completion_tokens", 5}}},
    };
    res.set_content(reply.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("TMKBENCH_TEST_CREDENTIAL", "sk-test", 1);
  gateway::ModelConfig config;
  config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  config.model = "test-model";
  config.credential_env = "TMKBENCH_TEST_CREDENTIAL";
  config.retry.max_attempts = 3;
  config.retry.backoff_base = std::chrono::milliseconds(10);

  auto r = Responder::remote(config).complete("be terse", "hello");
  auto response = expect_response(r);
  CHECK(response.text == "[PLAN]\n[PLAN END]");
  CHECK(response.prompt_tokens == 12);
  CHECK(response.completion_tokens == 5);
  CHECK(hits.load() == 2);  // one 429 then one success

  server.stop();
  server_thread.join();
}

TEST_CASE("retries exhaust into a rate-limited transport error") {
  httplib::Server server;
  server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
    res.status = 429;
    res.set_header("Retry-After", "7");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("TMKBENCH_TEST_CREDENTIAL", "sk-test", 1);
  gateway::ModelConfig config;
  config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  config.model = "test-model";
  config.credential_env = "TMKBENCH_TEST_CREDENTIAL";
  config.retry.max_attempts = 2;
  config.retry.backoff_base = std::chrono::milliseconds(5);

  auto r = Responder::remote(config).complete("", "hello");
  REQUIRE(std::holds_alternative<TransportError>(r));
  const auto& err = std::get<TransportError>(r);
  CHECK(err.kind == TransportError::Kind::RateLimited);
  REQUIRE(err.retry_after);
  CHECK(err.retry_after->count() == 7);

  server.stop();
  server_thread.join();
}
