#include "rankone/app/cli.hpp"

#include <omp.h>

#include <chrono>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "rankone/families.hpp"

namespace rankone::app {

using nlohmann::json;

RunRecord run(ExperimentConfig& config) {
  validate(config);
  if (config.threads > 0) omp_set_num_threads(config.threads);
  const Operation* op = find_operation(config.operation);
  RunRecord rec;
  rec.operation = op->name;
  rec.config = canonical_json(config);
  rec.config_hash = config_hash(config);
  rec.digits = config.digits;
  if (op->needs_schedule) rec.family = config.schedule.value("family", "");
  RunContext ctx(config);
  auto t0 = std::chrono::steady_clock::now();
  rec.result = op->run(ctx);
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

void emit(const RunRecord& record, const ExperimentConfig& config, std::ostream& out) {
  std::string record_text = record.to_json().dump(2) + "\n";
  if (config.format == "json") {
    if (config.out.empty()) out << record_text;
    else write_atomic(config.out, record_text);
    return;
  }
  std::string csv = to_csv(record.result.table ? *record.result.table : scalar_table(record.result.output));
  if (config.out.empty()) {
    out << csv;
  } else {
    write_atomic(config.out, csv);
    out << record_text;
  }
}

namespace {

struct Flags {
  std::string config_path;
  std::string out;
  std::string format;
  std::string tol;
  std::optional<std::int64_t> max_stage;
  std::optional<std::size_t> size_cap;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> digits;
  std::vector<std::string> params;
  std::string params_json;
  std::string family;
  std::string schedule;
  std::string method;
  std::string operation;
  std::string describe_name;
  std::optional<std::int64_t> count;
};

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

json parse_object(const std::string& text, const char* what) {
  try {
    json j = json::parse(text);
    require(j.is_object(), ErrorCode::ConfigError, std::string(what) + " must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string(what) + " is not valid JSON: " + e.what());
  }
}

// Flags first; a config file, when given, overrides them key by key.
ExperimentConfig config_from_flags(const Flags& f, const std::string& operation) {
  json j = json::object();
  if (!f.schedule.empty()) j["schedule"] = parse_object(f.schedule, "--schedule");
  else if (!f.family.empty()) j["schedule"] = {{"family", f.family}};
  if (!operation.empty()) j["operation"] = operation;
  json params = json::object();
  if (!f.params_json.empty()) params = parse_object(f.params_json, "--params");
  for (const auto& kv : f.params) {
    auto eq = kv.find('=');
    require(eq != std::string::npos && eq > 0, ErrorCode::ConfigError, "--param expects key=value, got '" + kv + "'");
    params[kv.substr(0, eq)] = parse_value(kv.substr(eq + 1));
  }
  if (!f.describe_name.empty()) params["name"] = f.describe_name;
  if (f.count) params["count"] = *f.count;
  j["params"] = params;
  if (!f.tol.empty()) j["tol"] = f.tol;
  if (f.max_stage) j["max_stage"] = *f.max_stage;
  if (f.size_cap) j["size_cap"] = *f.size_cap;
  if (f.seed) j["seed"] = *f.seed;
  if (f.threads) j["threads"] = *f.threads;
  if (f.digits) j["digits"] = *f.digits;
  if (!f.method.empty()) j["method"] = f.method;
  if (!f.out.empty()) j["out"] = f.out;
  if (!f.format.empty()) j["format"] = f.format;
  ExperimentConfig base = config_from_json(j);
  return f.config_path.empty() ? base : load_config(f.config_path, base);
}

int exit_code_for(const Error& e) { return e.is_budget() ? kExitBudget : kExitConfig; }

void emit_budget_failure(const BudgetExceeded& e, const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  json rec = {{"operation", config.operation},
              {"error", e.what()},
              {"code", error_code_name(e.code())},
              {"exhausted", true},
              {"partial", e.partial().has_value()}};
  if (e.partial())
    rec["partial_value"] = {{"lo", to_decimal(e.partial()->lo(), config.digits)},
                            {"hi", to_decimal(e.partial()->hi(), config.digits)},
                            {"lo_exact", to_string(e.partial()->lo())},
                            {"hi_exact", to_string(e.partial()->hi())}};
  std::string text = rec.dump(2) + "\n";
  if (config.out.empty()) out << text;
  else write_atomic(config.out, text);
  err << "rankone: " << e.what() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact rank-one cutting-and-stacking toolkit", "rankone"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config_path, "JSON experiment config; its keys override flags");
  app.add_option("--out", f.out, "output file (default: stdout)");
  app.add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", f.tol, "absolute enclosure width target (decimal or p/q)");
  app.add_option("--max-stage", f.max_stage, "deepest stage the engine may refine to");
  app.add_option("--size-cap", f.size_cap, "largest level set the engine may materialise");
  app.add_option("--seed", f.seed, "seed for stochastic families and operations");
  app.add_option("--threads", f.threads, "OpenMP threads (1 disables parallel kernels)");
  app.add_option("--digits", f.digits, "fractional digits of decimal renderings");
  app.add_option("--param", f.params, "operation parameter key=value (value parsed as JSON)");
  app.add_option("--params", f.params_json, "operation parameters as a JSON object");
  app.add_option("--family", f.family, "schedule family with default parameters");
  app.add_option("--schedule", f.schedule, "schedule as a JSON object");
  app.add_option("--method", f.method, "auto, refine_decode, meet_in_the_middle or difference_recursion");

  std::map<CLI::App*, std::string> op_of;
  CLI::App* run_cmd = app.add_subcommand("run", "run the operation named in the config");
  run_cmd->add_option("--operation", f.operation, "operation name");
  op_of[run_cmd] = "";
  CLI::App* list_ops = app.add_subcommand("list-operations", "list operation names");
  CLI::App* stages = app.add_subcommand("stages", "print the first stage vectors as JSON");
  stages->add_option("--count", f.count, "number of stages");
  op_of[stages] = "stage_vectors";
  op_of[app.add_subcommand("towers", "print the tower sequence as JSON")] = "tower_sequence";
  for (const auto& op : operations()) {
    std::string dashed = op.name;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    CLI::App* sub = app.add_subcommand(dashed, op.summary);
    if (dashed != op.name) sub->alias(op.name);
    if (op.name == "describe") sub->add_option("name", f.describe_name, "family name");
    op_of[sub] = op.name;
  }
  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen == list_ops) {
    json arr = json::array();
    for (const auto& op : operations()) arr.push_back({{"name", op.name}, {"summary", op.summary}, {"needs_schedule", op.needs_schedule}});
    out << arr.dump(2) << "\n";
    return kExitOk;
  }
  std::string operation = chosen == run_cmd ? f.operation : op_of[chosen];

  ExperimentConfig config;
  try {
    config = config_from_flags(f, operation);
    RunRecord rec = run(config);
    emit(rec, config, out);
    return rec.result.exhausted ? kExitBudget : kExitOk;
  } catch (const BudgetExceeded& e) {
    try {
      emit_budget_failure(e, config, out, err);
    } catch (const std::exception& w) {
      err << "rankone: " << w.what() << "\n";
    }
    return kExitBudget;
  } catch (const Error& e) {
    err << "rankone: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const json::exception& e) {
    err << "rankone: ConfigError: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "rankone: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace rankone::app
