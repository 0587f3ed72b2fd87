#pragma once

#include <string>

#include "json.hpp"
#include "rankone/app/config.hpp"
#include "rankone/app/operations.hpp"

namespace rankone::app {

struct RunRecord {
  std::string config_hash;
  std::string tool_version = kToolVersion;
  double wall_time = 0;  // seconds; the only field that varies between identical runs
  std::string operation;
  std::string family;
  nlohmann::json config;
  OpResult result;
  int digits = 12;

  nlohmann::json to_json() const;
};

// RFC 4180 quoting where needed.
std::string to_csv(const Table& t);
// Two-column key,value table of the scalar top-level fields of `output`.
Table scalar_table(const nlohmann::json& output);

// Writes to `path.tmp` and renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace rankone::app
