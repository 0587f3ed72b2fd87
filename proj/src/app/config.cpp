#include "rankone/app/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rankone/app/operations.hpp"
#include "rankone/family_spec.hpp"
#include "rankone/json_util.hpp"

namespace rankone::app {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Rational tol_from_json(const json& v) {
  if (v.is_string()) return rational_from_string(v.get<std::string>());
  if (v.is_number_integer()) return Rational(big_from_json(v));
  if (v.is_number()) return rational_from_double(v.get<double>());
  fail(ErrorCode::ConfigError, "tol must be a number or a decimal/rational string");
}

template <class T>
T number(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::ConfigError, std::string("'") + key + "' has the wrong type");
  }
}

const std::vector<std::string> kKnownKeys = {"schedule", "operation", "params", "tol",     "max_stage", "size_cap",
                                             "extra_stages", "state_cap", "method", "seed", "threads",  "out",
                                             "format",   "digits"};

}  // namespace

std::string normalize_operation(const std::string& name) {
  std::string s = name;
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

ExperimentConfig config_from_json(const json& j, const ExperimentConfig& base) {
  require(j.is_object(), ErrorCode::ConfigError, "config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    require(std::find(kKnownKeys.begin(), kKnownKeys.end(), it.key()) != kKnownKeys.end(), ErrorCode::ConfigError,
            "unknown config key '" + it.key() + "'");
  ExperimentConfig c = base;
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    c.schedule = s.is_string() ? json{{"family", s.get<std::string>()}} : s;
  }
  if (j.contains("operation")) c.operation = normalize_operation(number<std::string>(j, "operation"));
  if (j.contains("params")) {
    require(j.at("params").is_object(), ErrorCode::ConfigError, "'params' must be an object");
    for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it) c.params[it.key()] = it.value();
  }
  try {
    if (j.contains("tol")) c.engine.tol = tol_from_json(j.at("tol"));
  } catch (const Error& e) {
    fail(ErrorCode::ConfigError, e.what());
  }
  if (j.contains("max_stage")) c.engine.max_stage = number<std::int64_t>(j, "max_stage");
  if (j.contains("size_cap")) c.engine.size_cap = number<std::size_t>(j, "size_cap");
  if (j.contains("extra_stages")) c.engine.extra_stages = number<std::int64_t>(j, "extra_stages");
  if (j.contains("state_cap")) c.engine.state_cap = number<std::size_t>(j, "state_cap");
  if (j.contains("method")) c.engine.method = method_from_string(number<std::string>(j, "method"));
  if (j.contains("seed")) c.seed = number<std::uint64_t>(j, "seed");
  if (j.contains("threads")) c.threads = number<int>(j, "threads");
  if (j.contains("out")) c.out = number<std::string>(j, "out");
  if (j.contains("format")) c.format = number<std::string>(j, "format");
  if (j.contains("digits")) c.digits = number<int>(j, "digits");
  return c;
}

ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::ConfigError, "cannot read config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, "config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j, base);
}

json canonical_json(const ExperimentConfig& c) {
  // nlohmann::json objects keep keys sorted, so dump() is canonical.
  json j = {{"schedule", c.schedule},
            {"operation", c.operation},
            {"params", c.params},
            {"tol", to_string(c.engine.tol)},
            {"max_stage", c.engine.max_stage},
            {"size_cap", c.engine.size_cap},
            {"extra_stages", c.engine.extra_stages},
            {"state_cap", c.engine.state_cap},
            {"method", method_name(c.engine.method)},
            {"format", c.format},
            {"digits", c.digits}};
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_json(c).dump())));
  return buf;
}

bool schedule_is_stochastic(const json& schedule) {
  return schedule.is_object() && schedule.value("family", "") == "ornstein";
}

bool operation_is_stochastic(const std::string& op) { return op == "stat_lemma_mc"; }

void validate(ExperimentConfig& c) {
  require(!c.operation.empty(), ErrorCode::ConfigError, "no operation given");
  const Operation* op = find_operation(c.operation);
  require(op != nullptr, ErrorCode::ConfigError, "unknown operation '" + c.operation + "'");
  require(c.format == "json" || c.format == "csv", ErrorCode::ConfigError, "format must be json or csv");
  require(c.digits >= 0 && c.digits <= 200, ErrorCode::ConfigError, "digits must lie in 0..200");
  require(c.engine.tol >= 0, ErrorCode::ConfigError, "tol must be non-negative");
  require(c.engine.size_cap > 0, ErrorCode::ConfigError, "size_cap must be positive");
  require(c.threads >= 0, ErrorCode::ConfigError, "threads must be non-negative");

  if (op->needs_schedule) {
    require(c.schedule.is_object(), ErrorCode::ConfigError, "operation '" + c.operation + "' needs a schedule");
    FamilySpec spec;
    try {
      from_json(c.schedule, spec);  // throws UnknownFamily on a bad name
    } catch (const json::exception& e) {
      fail(ErrorCode::ConfigError, std::string("bad schedule: ") + e.what());
    }
    if (schedule_is_stochastic(c.schedule)) {
      if (c.seed) c.schedule["seed"] = *c.seed;
      require(c.schedule.contains("seed"), ErrorCode::ConfigError, "stochastic family 'ornstein' needs a seed");
    }
  }
  if (operation_is_stochastic(c.operation)) {
    if (c.seed && !c.params.contains("seed")) c.params["seed"] = *c.seed;
    require(c.params.contains("seed"), ErrorCode::ConfigError, "operation '" + c.operation + "' needs a seed");
  }
}

}  // namespace rankone::app
