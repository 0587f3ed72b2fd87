#include "rankone/app/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace rankone::app {

using nlohmann::json;

json RunRecord::to_json() const {
  return {{"config_hash", config_hash},
          {"tool_version", tool_version},
          {"wall_time", wall_time},
          {"operation", operation},
          {"family", family},
          {"config", config},
          {"outputs", result.output},
          {"max_width", {{"exact", to_string(result.max_width)}, {"decimal", to_decimal(result.max_width, digits)}}},
          {"exhausted", result.exhausted},
          {"partial", result.exhausted},
          {"precision", digits}};
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quote(cells[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

Table scalar_table(const json& output) {
  Table t{{"key", "value"}, {}};
  if (!output.is_object()) return t;
  for (auto it = output.begin(); it != output.end(); ++it) {
    const json& v = it.value();
    if (v.is_string()) t.rows.push_back({it.key(), v.get<std::string>()});
    else if (v.is_primitive()) t.rows.push_back({it.key(), v.dump()});
  }
  return t;
}

void write_atomic(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), ErrorCode::ConfigError, "cannot write '" + tmp + "'");
    f << content;
    f.flush();
    require(static_cast<bool>(f), ErrorCode::ConfigError, "write to '" + tmp + "' failed");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace rankone::app
