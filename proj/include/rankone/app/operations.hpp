#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rankone/app/config.hpp"
#include "rankone/tower.hpp"

namespace rankone::app {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct OpResult {
  nlohmann::json output;
  std::optional<Table> table;
  Rational max_width{0};  // widest enclosure among the outputs
  bool exhausted = false;  // some value is a partial enclosure after a budget ran out
};

/// Schedule-bound state shared by one run.
class RunContext {
 public:
  explicit RunContext(const ExperimentConfig& config);
  const ExperimentConfig& config() const { return config_; }
  const nlohmann::json& params() const { return config_.params; }
  const EngineOptions& engine() const { return engine_; }
  const TowerChain& chain();

 private:
  const ExperimentConfig& config_;
  EngineOptions engine_;
  std::unique_ptr<TowerChain> chain_;
};

struct Operation {
  std::string name;
  std::string summary;
  bool needs_schedule = true;
  std::function<OpResult(RunContext&)> run;
};

const std::vector<Operation>& operations();
const Operation* find_operation(const std::string& name);

// Lags from an explicit array, {"range": [a, b], "step": s} (b inclusive),
// or {"heights": [j_lo, j_hi], "scale": c, "offset": d} giving c h_j + d.
// An empty result is a ConfigError.
std::vector<BigInt> parse_lags(const nlohmann::json& spec, const TowerChain* chain);

}  // namespace rankone::app
