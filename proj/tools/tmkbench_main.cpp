#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tmkbench/bench.hpp"
#include "tmkbench/oracle.hpp"
#include "tmkbench/text.hpp"

namespace fs = std::filesystem;
using namespace tmkbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTransport = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

vocab::Variant parse_variant(const std::string& name) {
  auto v = vocab::variant_from_name(name);
  if (!v) throw std::runtime_error("unknown variant: " + name);
  return *v;
}

int cmd_gen(const std::string& out_dir, int count, int min_blocks, int max_blocks,
            std::uint64_t seed, const std::string& names) {
  oracle::Naming naming = names == "colors" ? oracle::Naming::Colors : oracle::Naming::Letters;
  fs::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    int n = min_blocks + (max_blocks > min_blocks ? i % (max_blocks - min_blocks + 1) : 0);
    prompts::Instance inst = oracle::random_instance(n, seed + static_cast<std::uint64_t>(i), naming);
    char name[64];
    std::snprintf(name, sizeof(name), "inst-%04d.json", i);
    bench::save_instance(inst, (fs::path(out_dir) / name).string());
  }
  std::cout << "wrote " << count << " instances to " << out_dir << "\n";
  return kExitOk;
}

int cmd_prompt(const std::string& instance_path, const std::string& variant_name,
               const std::string& mode_name) {
  auto variant = parse_variant(variant_name);
  auto mode = prompts::mode_from_name(mode_name);
  if (!mode) throw std::runtime_error("unknown mode: " + mode_name);
  prompts::PromptSpec spec;
  spec.variant = variant;
  spec.mode = *mode;
  spec.query = bench::load_instance(instance_path);
  if (prompts::is_one_shot(*mode)) spec.demo = prompts::fixed_demo(variant);
  std::cout << prompts::assemble_prompt(spec);
  return kExitOk;
}

int cmd_oracle(const std::string& instance_path, const std::string& variant_name, bool tags) {
  auto variant = parse_variant(variant_name);
  prompts::Instance inst = bench::load_instance(instance_path);
  auto result = oracle::solve_optimal(inst);
  if (!result) {
    std::cerr << "unsolvable goal\n";
    return kExitData;
  }
  const auto& v = vocab::builtin(variant);
  if (tags) std::cout << "[PLAN]\n";
  for (const auto& line : prompts::render_plan_lines(v, result->plan)) std::cout << line << "\n";
  if (tags) std::cout << "[PLAN END]\n";
  return kExitOk;
}

int cmd_validate(const std::string& instance_path, const std::string& response_path,
                 const std::string& variant_name) {
  auto variant = parse_variant(variant_name);
  prompts::Instance inst = bench::load_instance(instance_path);
  const auto& v = vocab::builtin(variant);
  extract::RawResponse response;
  response.text = read_file(response_path);
  extract::ExtractedPlan plan = extract::extract_plan(v, inst, response);
  std::cout << "extracted plan (" << plan.actions.size() << " steps):\n";
  for (const auto& line : prompts::render_plan_lines(v, plan.actions)) {
    std::cout << "  " << line << "\n";
  }
  for (const auto& dropped : plan.dropped) {
    std::cout << "dropped line " << dropped.line_no << " (" << dropped.reason
              << "): " << dropped.line << "\n";
  }
  bench::Verdict verdict = bench::judge(inst, plan.actions);
  std::cout << "verdict: " << bench::verdict_kind_name(verdict.kind);
  if (verdict.kind == bench::Verdict::Kind::WrongStep) {
    std::cout << " at step " << verdict.step_index << " (" << verdict.rule << ")";
  }
  std::cout << "\n";
  return kExitOk;
}

int cmd_tmk(const std::string& variant_name, const std::string& dialect_name) {
  auto variant = parse_variant(variant_name);
  tmk::Dialect dialect = tmk::default_dialect(variant);
  if (!dialect_name.empty()) {
    auto d = tmk::dialect_from_name(dialect_name);
    if (!d) throw std::runtime_error("unknown dialect: " + dialect_name);
    dialect = *d;
  }
  std::cout << tmk::serialize_tmk(tmk::generate_tmk(vocab::builtin(variant)), dialect) << "\n";
  return kExitOk;
}

int cmd_run(const std::string& config_path, bool force) {
  bench::RunConfig config = bench::load_run_config(config_path);
  gateway::set_request_limit(config.request_limit);
  auto dataset = bench::load_dataset(config.dataset_dir);
  bench::MatrixOptions options;
  options.records_path = config.records_path;
  options.system_prompt = config.system_prompt;
  options.force = force;
  options.parallelism = config.parallelism;
  options.progress = &std::cerr;
  bench::MatrixResult result =
      bench::run_matrix(dataset, config.models, config.variants, config.modes, options);
  std::cout << "written " << result.written << ", skipped " << result.skipped << ", failed "
            << result.failed << "\n";
  return result.failed > 0 ? kExitTransport : kExitOk;
}

int cmd_score(const std::string& records_path, const std::string& csv_path, bool compare) {
  bench::LoadReport report = bench::load_records(records_path);
  for (auto line : report.corrupt_lines) {
    std::cerr << "corrupt record at line " << line << "\n";
  }
  bench::ScoreTable table = bench::score(report.records);
  std::cout << (compare ? bench::format_compare(table) : bench::format_table(table));
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    out << bench::format_csv(table);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blocksworld planning benchmark harness with TMK prompting"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a dataset of instances");
  std::string gen_out = "dataset";
  int gen_count = 30;
  int gen_min = 3, gen_max = 5;
  std::uint64_t gen_seed = 1;
  std::string gen_names = "letters";
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--count", gen_count, "number of instances");
  gen->add_option("--min-blocks", gen_min, "minimum block count");
  gen->add_option("--max-blocks", gen_max, "maximum block count");
  gen->add_option("--seed", gen_seed, "base seed");
  gen->add_option("--names", gen_names, "block naming: letters|colors");

  auto* prompt = app.add_subcommand("prompt", "emit one assembled prompt");
  std::string p_instance, p_variant = "classic", p_mode = "plain-oneshot";
  prompt->add_option("--instance", p_instance, "instance file")->required();
  prompt->add_option("--variant", p_variant, "classic|mystery|random");
  prompt->add_option("--mode", p_mode, "plain-zeroshot|plain-oneshot|tmk-oneshot");

  auto* orc = app.add_subcommand("oracle", "solve an instance optimally");
  std::string o_instance, o_variant = "classic";
  bool o_tags = false;
  orc->add_option("--instance", o_instance, "instance file")->required();
  orc->add_option("--variant", o_variant, "surface form for the plan");
  orc->add_flag("--tags", o_tags, "wrap the plan in [PLAN] tags");

  auto* validate = app.add_subcommand("validate", "extract and judge one response");
  std::string v_instance, v_response, v_variant = "classic";
  validate->add_option("--instance", v_instance, "instance file")->required();
  validate->add_option("--response", v_response, "raw response file")->required();
  validate->add_option("--variant", v_variant, "classic|mystery|random");

  auto* tmk_cmd = app.add_subcommand("tmk", "emit the TMK JSON for a variant");
  std::string t_variant = "classic", t_dialect;
  tmk_cmd->add_option("--variant", t_variant, "classic|mystery|random");
  tmk_cmd->add_option("--dialect", t_dialect, "stringlist|booleanmap (default per variant)");

  auto* run = app.add_subcommand("run", "execute a run matrix from a config file");
  std::string r_config;
  bool r_force = false;
  run->add_option("--config", r_config, "run config JSON")->required();
  run->add_flag("--force", r_force, "rerun trials already recorded");

  auto* score = app.add_subcommand("score", "score a record log");
  std::string s_records, s_csv;
  bool s_compare = false;
  score->add_option("--records", s_records, "records.jsonl")->required();
  score->add_option("--csv", s_csv, "also write a CSV");
  score->add_flag("--compare", s_compare, "plain-vs-TMK delta view");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_out, gen_count, gen_min, gen_max, gen_seed, gen_names);
    if (prompt->parsed()) return cmd_prompt(p_instance, p_variant, p_mode);
    if (orc->parsed()) return cmd_oracle(o_instance, o_variant, o_tags);
    if (validate->parsed()) return cmd_validate(v_instance, v_response, v_variant);
    if (tmk_cmd->parsed()) return cmd_tmk(t_variant, t_dialect);
    if (run->parsed()) return cmd_run(r_config, r_force);
    if (score->parsed()) return cmd_score(s_records, s_csv, s_compare);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
