#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmkbench/gateway.hpp"
#include "tmkbench/prompts.hpp"

namespace tmkbench::bench {

inline constexpr int kRecordSchemaVersion = 1;

struct Verdict {
  enum class Kind { Correct, WrongStep, WrongGoal, EmptyPlan, Failed };
  Kind kind = Kind::EmptyPlan;
  int step_index = -1;          // WrongStep: zero-based failing step
  std::string rule;             // WrongStep: violated rule name
  std::string error_class;      // Failed: transport error class

  bool operator==(const Verdict&) const = default;
};

std::string verdict_kind_name(Verdict::Kind k);

/// A plan is correct only when every step is legal and the final state
/// satisfies the goal; an empty extraction is its own outcome.
Verdict judge(const prompts::Instance& instance, const std::vector<core::Action>& actions);

struct RunRecord {
  int schema_version = kRecordSchemaVersion;
  std::string instance_id;
  vocab::Variant variant = vocab::Variant::Classic;
  prompts::Mode mode = prompts::Mode::PlainZeroShot;
  std::string model;
  std::string prompt_hash;                 // fnv1a-64 of the assembled prompt
  std::string response_text;
  std::vector<std::string> plan_surface;   // extracted plan, surface form
  Verdict verdict;
  std::string ts;                          // ISO-8601 UTC, excluded from equality checks
  long wall_ms = 0;                        // excluded from equality checks
  int prompt_tokens = 0;
  int completion_tokens = 0;
  double temperature = 0.0;
  int max_output_tokens = 0;

  std::string key() const;  // (instance, model, mode, variant) idempotency key
};

struct SchemaVersionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadReport {
  std::vector<RunRecord> records;
  std::vector<std::size_t> corrupt_lines;  // one-based line numbers
};

std::string record_to_json_line(const RunRecord& r);
void append_records(const std::vector<RunRecord>& records, const std::string& path);
/// Line-delimited JSON. Corrupt lines are reported with their line numbers
/// and skipped; a line with a foreign schema version aborts the load.
LoadReport load_records(const std::string& path);

struct ScoreKey {
  std::string model;
  vocab::Variant variant;
  prompts::Mode mode;

  auto operator<=>(const ScoreKey&) const = default;
};

struct ScoreCell {
  int n = 0;
  int correct = 0;

  double accuracy() const { return n == 0 ? 0.0 : 100.0 * correct / n; }
};

using ScoreTable = std::map<ScoreKey, ScoreCell>;

ScoreTable score(const std::vector<RunRecord>& records);
std::string format_table(const ScoreTable& table);    // models as row groups, variants as sub-rows
std::string format_csv(const ScoreTable& table);
std::string format_compare(const ScoreTable& table);  // best plain mode vs tmk, per model+variant

struct ModelEntry {
  std::string name;
  gateway::Responder responder = gateway::Responder::oracle();
  double temperature = 0.0;
  int max_output_tokens = 1024;
};

struct MatrixOptions {
  std::string records_path;
  std::string system_prompt;
  bool force = false;      // rerun trials whose key is already recorded
  int parallelism = 1;     // byte-stable record order requires 1
  std::function<bool(std::size_t records_done)> should_stop;  // polled between trials
  std::ostream* progress = nullptr;
};

struct MatrixResult {
  std::size_t written = 0;
  std::size_t skipped = 0;   // keys already present
  std::size_t failed = 0;    // trials recorded with a Failed verdict
  bool stopped = false;      // should_stop requested an early exit
};

/// Runs the full (model x variant x mode x instance) grid. Every trial
/// appends one durable record; reruns skip already-recorded keys unless
/// forced. Transport failures become Failed verdicts, never aborts.
MatrixResult run_matrix(const std::vector<prompts::Instance>& dataset,
                        const std::vector<ModelEntry>& models,
                        const std::vector<vocab::Variant>& variants,
                        const std::vector<prompts::Mode>& modes, const MatrixOptions& options);

// Instance files.
std::string instance_to_json(const prompts::Instance& inst);
prompts::Instance instance_from_json(const std::string& json_text);
void save_instance(const prompts::Instance& inst, const std::string& path);
prompts::Instance load_instance(const std::string& path);

struct RunConfig {
  std::string dataset_dir;
  std::string records_path = "records.jsonl";
  std::string system_prompt;
  std::vector<vocab::Variant> variants;
  std::vector<prompts::Mode> modes;
  std::vector<ModelEntry> models;
  int parallelism = 1;
  int request_limit = 4;
};

RunConfig load_run_config(const std::string& path);
std::vector<prompts::Instance> load_dataset(const std::string& dir);

}  // namespace tmkbench::bench
