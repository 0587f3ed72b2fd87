#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "rankone/engine.hpp"

namespace rankone::app {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything that identifies one run. `threads` and `out` do not affect the
/// numbers and are left out of the canonical form and hash.
struct ExperimentConfig {
  nlohmann::json schedule;  // family spec object, or null for schedule-free operations
  std::string operation;
  nlohmann::json params = nlohmann::json::object();
  EngineOptions engine;
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0: OpenMP default
  std::string out;  // empty: stdout
  std::string format = "json";
  int digits = 12;
};

// Reads the JSON config format on top of `base`; keys present in `j` win.
ExperimentConfig config_from_json(const nlohmann::json& j, const ExperimentConfig& base = {});
ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base = {});

nlohmann::json canonical_json(const ExperimentConfig& c);
// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

// Checks operation, family, seed and format rules; pushes the seed into
// stochastic schedules. Throws ConfigError or UnknownFamily.
void validate(ExperimentConfig& c);

bool schedule_is_stochastic(const nlohmann::json& schedule);
bool operation_is_stochastic(const std::string& op);

// "weak-limit-fit" and "weak_limit_fit" name the same operation.
std::string normalize_operation(const std::string& name);

}  // namespace rankone::app
