#include "tmkbench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tmkbench/extract.hpp"
#include "tmkbench/text.hpp"

namespace tmkbench::bench {

namespace fs = std::filesystem;
using nlohmann::json;
using prompts::Instance;
using prompts::Mode;
using vocab::Variant;

std::string verdict_kind_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Correct: return "correct";
    case Verdict::Kind::WrongStep: return "wrong_step";
    case Verdict::Kind::WrongGoal: return "wrong_goal";
    case Verdict::Kind::EmptyPlan: return "empty_plan";
    case Verdict::Kind::Failed: return "failed";
  }
  return "?";
}

namespace {

std::optional<Verdict::Kind> verdict_kind_from_name(const std::string& s) {
  for (auto k : {Verdict::Kind::Correct, Verdict::Kind::WrongStep, Verdict::Kind::WrongGoal,
                 Verdict::Kind::EmptyPlan, Verdict::Kind::Failed}) {
    if (verdict_kind_name(k) == s) return k;
  }
  return std::nullopt;
}

std::string now_utc_iso() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Verdict judge(const Instance& instance, const std::vector<core::Action>& actions) {
  Verdict v;
  auto result = core::execute_plan(instance.initial, actions);
  if (auto* failure = std::get_if<core::Failure>(&result)) {
    v.kind = Verdict::Kind::WrongStep;
    v.step_index = static_cast<int>(failure->step_index);
    v.rule = core::rule_name(failure->error.rule);
    return v;
  }
  const auto& trace = std::get<core::Trace>(result);
  if (core::satisfies(trace.final_state(), instance.goal)) {
    v.kind = Verdict::Kind::Correct;
    return v;
  }
  v.kind = actions.empty() ? Verdict::Kind::EmptyPlan : Verdict::Kind::WrongGoal;
  return v;
}

std::string RunRecord::key() const {
  return instance_id + "|" + model + "|" + prompts::mode_name(mode) + "|" +
         vocab::variant_name(variant);
}

std::string record_to_json_line(const RunRecord& r) {
  json j;
  j["v"] = r.schema_version;
  j["instance"] = r.instance_id;
  j["variant"] = vocab::variant_name(r.variant);
  j["mode"] = prompts::mode_name(r.mode);
  j["model"] = r.model;
  j["prompt_hash"] = r.prompt_hash;
  j["response"] = r.response_text;
  j["plan"] = r.plan_surface;
  j["verdict"] = verdict_kind_name(r.verdict.kind);
  if (r.verdict.kind == Verdict::Kind::WrongStep) {
    j["step_index"] = r.verdict.step_index;
    j["rule"] = r.verdict.rule;
  }
  if (r.verdict.kind == Verdict::Kind::Failed) j["error_class"] = r.verdict.error_class;
  j["ts"] = r.ts;
  j["wall_ms"] = r.wall_ms;
  j["prompt_tokens"] = r.prompt_tokens;
  j["completion_tokens"] = r.completion_tokens;
  j["temperature"] = r.temperature;
  j["max_output_tokens"] = r.max_output_tokens;
  return j.dump();
}

namespace {

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.schema_version = j.at("v").get<int>();
  r.instance_id = j.at("instance").get<std::string>();
  auto variant = vocab::variant_from_name(j.at("variant").get<std::string>());
  auto mode = prompts::mode_from_name(j.at("mode").get<std::string>());
  auto kind = verdict_kind_from_name(j.at("verdict").get<std::string>());
  if (!variant || !mode || !kind) throw std::runtime_error("bad enum value");
  r.variant = *variant;
  r.mode = *mode;
  r.model = j.at("model").get<std::string>();
  r.prompt_hash = j.at("prompt_hash").get<std::string>();
  r.response_text = j.at("response").get<std::string>();
  r.plan_surface = j.at("plan").get<std::vector<std::string>>();
  r.verdict.kind = *kind;
  r.verdict.step_index = j.value("step_index", -1);
  r.verdict.rule = j.value("rule", "");
  r.verdict.error_class = j.value("error_class", "");
  r.ts = j.value("ts", "");
  r.wall_ms = j.value("wall_ms", 0L);
  r.prompt_tokens = j.value("prompt_tokens", 0);
  r.completion_tokens = j.value("completion_tokens", 0);
  r.temperature = j.value("temperature", 0.0);
  r.max_output_tokens = j.value("max_output_tokens", 0);
  return r;
}

}  // namespace

void append_records(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open record log: " + path);
  for (const auto& r : records) {
    out << record_to_json_line(r) << "\n";
  }
  out.flush();
}

LoadReport load_records(const std::string& path) {
  LoadReport report;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open record log: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const std::exception&) {
      report.corrupt_lines.push_back(line_no);
      continue;
    }
    int v = j.value("v", -1);
    if (v != kRecordSchemaVersion) {
      throw SchemaVersionMismatch("record log line " + std::to_string(line_no) + " has schema v" +
                                  std::to_string(v) + ", loader supports v" +
                                  std::to_string(kRecordSchemaVersion));
    }
    try {
      report.records.push_back(record_from_json(j));
    } catch (const std::exception&) {
      report.corrupt_lines.push_back(line_no);
    }
  }
  return report;
}

ScoreTable score(const std::vector<RunRecord>& records) {
  ScoreTable table;
  for (const auto& r : records) {
    ScoreCell& cell = table[{r.model, r.variant, r.mode}];
    ++cell.n;
    if (r.verdict.kind == Verdict::Kind::Correct) ++cell.correct;
  }
  return table;
}

namespace {

std::string fixed1(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", x);
  return buf;
}

std::vector<std::string> models_in(const ScoreTable& table) {
  std::vector<std::string> models;
  for (const auto& [key, cell] : table) {
    if (models.empty() || models.back() != key.model) {
      if (std::find(models.begin(), models.end(), key.model) == models.end()) {
        models.push_back(key.model);
      }
    }
  }
  return models;
}

constexpr Variant kVariants[] = {Variant::Classic, Variant::Mystery, Variant::Random};
constexpr Mode kModes[] = {Mode::PlainZeroShot, Mode::PlainOneShot, Mode::TmkOneShot};

}  // namespace

std::string format_table(const ScoreTable& table) {
  std::ostringstream out;
  out << "Model                Variant   Plain zero-shot   Plain one-shot    TMK one-shot\n";
  out << "-----                -------   ---------------   --------------    ------------\n";
  for (const auto& model : models_in(table)) {
    for (Variant variant : kVariants) {
      bool any = false;
      for (Mode mode : kModes) {
        if (table.count({model, variant, mode})) any = true;
      }
      if (!any) continue;
      char line[160];
      std::string cells[3];
      for (int i = 0; i < 3; ++i) {
        auto it = table.find({model, variant, kModes[i]});
        cells[i] = it == table.end()
                       ? "-"
                       : fixed1(it->second.accuracy()) + " (" + std::to_string(it->second.correct) +
                             "/" + std::to_string(it->second.n) + ")";
      }
      std::snprintf(line, sizeof(line), "%-20s %-9s %-17s %-17s %s\n", model.c_str(),
                    vocab::variant_name(variant).c_str(), cells[0].c_str(), cells[1].c_str(),
                    cells[2].c_str());
      out << line;
    }
  }
  return out.str();
}

std::string format_csv(const ScoreTable& table) {
  std::string out = "model,variant,mode,n,correct,accuracy\n";
  for (const auto& [key, cell] : table) {
    out += key.model + "," + vocab::variant_name(key.variant) + "," + prompts::mode_name(key.mode) +
           "," + std::to_string(cell.n) + "," + std::to_string(cell.correct) + "," +
           fixed1(cell.accuracy()) + "\n";
  }
  return out;
}

std::string format_compare(const ScoreTable& table) {
  std::ostringstream out;
  out << "Model                Variant   Plain (best)   TMK      Delta\n";
  for (const auto& model : models_in(table)) {
    for (Variant variant : kVariants) {
      auto zero = table.find({model, variant, Mode::PlainZeroShot});
      auto one = table.find({model, variant, Mode::PlainOneShot});
      auto tmk = table.find({model, variant, Mode::TmkOneShot});
      if (zero == table.end() && one == table.end() && tmk == table.end()) continue;
      double plain = 0.0;
      bool has_plain = false;
      if (zero != table.end()) plain = std::max(plain, zero->second.accuracy()), has_plain = true;
      if (one != table.end()) plain = std::max(plain, one->second.accuracy()), has_plain = true;
      double tmk_acc = tmk == table.end() ? 0.0 : tmk->second.accuracy();
      char line[160];
      std::snprintf(line, sizeof(line), "%-20s %-9s %-14s %-8s %+.1f\n", model.c_str(),
                    vocab::variant_name(variant).c_str(),
                    has_plain ? fixed1(plain).c_str() : "-",
                    tmk != table.end() ? fixed1(tmk_acc).c_str() : "-",
                    tmk_acc - plain);
      out << line;
    }
  }
  return out.str();
}

namespace {

struct Trial {
  const ModelEntry* model;
  Variant variant;
  Mode mode;
  const Instance* instance;
};

RunRecord run_trial(const Trial& t, const MatrixOptions& options) {
  const vocab::Vocabulary& v = vocab::builtin(t.variant);
  RunRecord r;
  r.instance_id = t.instance->id;
  r.variant = t.variant;
  r.mode = t.mode;
  r.model = t.model->name;
  r.temperature = t.model->temperature;
  r.max_output_tokens = t.model->max_output_tokens;
  r.ts = now_utc_iso();

  prompts::PromptSpec spec;
  spec.variant = t.variant;
  spec.mode = t.mode;
  spec.query = *t.instance;
  if (prompts::is_one_shot(t.mode)) spec.demo = prompts::fixed_demo(t.variant);
  const std::string prompt = prompts::assemble_prompt(spec);
  r.prompt_hash = text::fnv1a64_hex(prompt);

  auto start = std::chrono::steady_clock::now();
  gateway::CompletionResult result = t.model->responder.complete(options.system_prompt, prompt);
  r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();

  if (auto* err = std::get_if<gateway::TransportError>(&result)) {
    r.verdict.kind = Verdict::Kind::Failed;
    r.verdict.error_class = err->class_name();
    r.response_text = err->detail;
    return r;
  }
  const auto& response = std::get<extract::RawResponse>(result);
  r.response_text = response.text;
  r.prompt_tokens = response.prompt_tokens;
  r.completion_tokens = response.completion_tokens;

  extract::ExtractedPlan plan = extract::extract_plan(v, *t.instance, response);
  r.plan_surface = prompts::render_plan_lines(v, plan.actions);
  r.verdict = judge(*t.instance, plan.actions);
  return r;
}

}  // namespace

MatrixResult run_matrix(const std::vector<Instance>& dataset, const std::vector<ModelEntry>& models,
                        const std::vector<Variant>& variants, const std::vector<Mode>& modes,
                        const MatrixOptions& options) {
  MatrixResult result;
  std::set<std::string> done;
  if (!options.force && fs::exists(options.records_path)) {
    for (const auto& r : load_records(options.records_path).records) {
      done.insert(r.key());
    }
  }

  // Scored instances never include the per-variant demonstration instance.
  std::vector<Trial> trials;
  for (const auto& model : models) {
    for (Variant variant : variants) {
      const std::string demo_id = prompts::fixed_demo(variant).instance.id;
      for (Mode mode : modes) {
        for (const auto& inst : dataset) {
          if (inst.id == demo_id) continue;
          trials.push_back({&model, variant, mode, &inst});
        }
      }
    }
  }

  std::ofstream out(options.records_path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open record log: " + options.records_path);
  std::mutex mu;
  std::size_t next = 0;
  std::size_t completed = 0;
  bool stop = false;

  auto worker = [&] {
    while (true) {
      Trial trial{};
      {
        std::lock_guard lock(mu);
        if (stop || next >= trials.size()) return;
        trial = trials[next++];
      }
      std::string key = trial.instance->id + "|" + trial.model->name + "|" +
                        prompts::mode_name(trial.mode) + "|" + vocab::variant_name(trial.variant);
      {
        std::lock_guard lock(mu);
        if (done.count(key)) {
          ++result.skipped;
          continue;
        }
      }
      RunRecord r = run_trial(trial, options);
      {
        std::lock_guard lock(mu);
        done.insert(key);
        out << record_to_json_line(r) << "\n";
        out.flush();
        ++result.written;
        ++completed;
        if (r.verdict.kind == Verdict::Kind::Failed) ++result.failed;
        if (options.progress) {
          (*options.progress) << "[" << completed << "/" << trials.size() << "] " << key << " -> "
                              << verdict_kind_name(r.verdict.kind) << "\n";
        }
        if (options.should_stop && options.should_stop(completed)) {
          stop = true;
          result.stopped = true;
        }
      }
    }
  };

  int workers = std::max(1, options.parallelism);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return result;
}

std::string instance_to_json(const Instance& inst) {
  json j;
  j["id"] = inst.id;
  j["blocks"] = inst.blocks;
  json towers = json::array();
  // rebuild bottom-to-top towers from the support map
  std::set<core::BlockId> bottoms;
  for (const auto& [b, sup] : inst.initial.support) {
    if (!sup) bottoms.insert(b);
  }
  std::map<core::BlockId, core::BlockId> above;  // support -> block resting on it
  for (const auto& [b, sup] : inst.initial.support) {
    if (sup) above[*sup] = b;
  }
  for (const auto& bottom : bottoms) {
    json tower = json::array();
    core::BlockId cur = bottom;
    tower.push_back(cur);
    while (above.count(cur)) {
      cur = above[cur];
      tower.push_back(cur);
    }
    towers.push_back(tower);
  }
  j["initial"]["towers"] = towers;
  j["initial"]["held"] = inst.initial.held ? json(*inst.initial.held) : json(nullptr);
  json goal = json::array();
  for (const auto& lit : inst.goal.literals) {
    json jl;
    switch (lit.pred) {
      case core::GoalPred::On: jl["pred"] = "on"; jl["args"] = {lit.a, lit.b}; break;
      case core::GoalPred::OnTable: jl["pred"] = "on-table"; jl["args"] = {lit.a}; break;
      case core::GoalPred::Clear: jl["pred"] = "clear"; jl["args"] = {lit.a}; break;
    }
    goal.push_back(jl);
  }
  j["goal"] = goal;
  return j.dump(2);
}

Instance instance_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  Instance inst;
  inst.id = j.at("id").get<std::string>();
  inst.blocks = j.at("blocks").get<std::vector<std::string>>();
  for (const auto& tower : j.at("initial").at("towers")) {
    core::BlockId below;
    for (const auto& jb : tower) {
      core::BlockId b = jb.get<std::string>();
      inst.initial.support[b] = below.empty() ? core::Support{} : core::Support{below};
      below = b;
    }
  }
  if (!j.at("initial").at("held").is_null()) {
    inst.initial.held = j["initial"]["held"].get<std::string>();
  }
  for (const auto& jl : j.at("goal")) {
    std::string pred = jl.at("pred").get<std::string>();
    auto args = jl.at("args").get<std::vector<std::string>>();
    if (pred == "on") {
      inst.goal.literals.push_back(core::goal_on(args.at(0), args.at(1)));
    } else if (pred == "on-table") {
      inst.goal.literals.push_back(core::goal_on_table(args.at(0)));
    } else if (pred == "clear") {
      inst.goal.literals.push_back(core::goal_clear(args.at(0)));
    } else {
      throw std::runtime_error("unknown goal predicate: " + pred);
    }
  }
  if (auto v = inst.violation()) throw std::runtime_error("invalid instance: " + *v);
  return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << instance_to_json(inst) << "\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

std::vector<Instance> load_dataset(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<Instance> out;
  for (const auto& p : paths) out.push_back(load_instance(p));
  return out;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read run config: " + path);
  json j = json::parse(in);
  RunConfig config;
  config.dataset_dir = j.at("dataset").get<std::string>();
  config.records_path = j.value("records", config.records_path);
  config.system_prompt = j.value("system_prompt", "");
  config.parallelism = j.value("parallelism", 1);
  config.request_limit = j.value("request_limit", 4);
  for (const auto& name : j.at("variants")) {
    auto v = vocab::variant_from_name(name.get<std::string>());
    if (!v) throw std::runtime_error("unknown variant: " + name.get<std::string>());
    config.variants.push_back(*v);
  }
  for (const auto& name : j.at("modes")) {
    auto m = prompts::mode_from_name(name.get<std::string>());
    if (!m) throw std::runtime_error("unknown mode: " + name.get<std::string>());
    config.modes.push_back(*m);
  }
  for (const auto& jm : j.at("models")) {
    ModelEntry entry;
    entry.name = jm.at("name").get<std::string>();
    entry.temperature = jm.value("temperature", 0.0);
    entry.max_output_tokens = jm.value("max_output_tokens", 1024);
    gateway::ModelConfig mc;
    mc.endpoint = jm.value("endpoint", "");
    mc.model = jm.value("model", entry.name);
    mc.credential_env = jm.value("credential_env", "");
    mc.temperature = entry.temperature;
    mc.max_output_tokens = entry.max_output_tokens;
    mc.timeout = std::chrono::milliseconds(jm.value("timeout_ms", 60000));
    mc.retry.max_attempts = jm.value("max_attempts", 3);
    mc.retry.backoff_base = std::chrono::milliseconds(jm.value("backoff_ms", 500));
    auto responder = gateway::responder_from_name(jm.value("responder", "remote"), mc,
                                                  jm.value("seed", 0ULL));
    if (!responder) {
      throw std::runtime_error("unknown responder: " + jm.value("responder", std::string()));
    }
    entry.responder = *responder;
    config.models.push_back(std::move(entry));
  }
  return config;
}

}  // namespace tmkbench::bench
