// Copyright 2026 The holeqst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "holeqst/sweep.hpp"
#include "json.hpp"

#ifndef HOLEQST_VERSION
#define HOLEQST_VERSION "0.0.0"
#endif

namespace holeqst {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>) return format_real(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return csv_field(v);
      },
      cell);
}

std::string json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "null";
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? format_real(v) : "null";
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return nlohmann::json(v).dump();
      },
      cell);
}

std::filesystem::path secondary_path(const std::filesystem::path& primary, const std::string& name) {
  auto out = primary;
  out.replace_filename(primary.stem().string() + "." + name + primary.extension().string());
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

std::string tool_version() { return HOLEQST_VERSION; }

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string render_table(const Table& table, const SweepConfig& config, OutputFormat format) {
  const std::vector<std::string> provenance = {"config_hash", "seed", "grid_points"};
  const std::vector<Cell> provenance_cells = {config.hash(), static_cast<long long>(config.seed),
                                              static_cast<long long>(config.time.points)};
  std::string out;
  if (format == OutputFormat::Csv) {
    std::string header;
    for (const auto& c : table.columns) header += csv_field(c) + ",";
    for (const auto& c : provenance) header += c + ",";
    header.back() = '\n';
    out += header;
    for (const auto& row : table.rows) {
      std::string line;
      for (const auto& cell : row) line += csv_cell(cell) + ",";
      for (const auto& cell : provenance_cells) line += csv_cell(cell) + ",";
      line.back() = '\n';
      out += line;
    }
  } else {
    for (const auto& row : table.rows) {
      std::string line = "{";
      for (std::size_t i = 0; i < row.size(); ++i) {
        line += nlohmann::json(table.columns[i]).dump() + ":" + json_cell(row[i]) + ",";
      }
      for (std::size_t i = 0; i < provenance.size(); ++i) {
        line += "\"" + provenance[i] + "\":" + json_cell(provenance_cells[i]) + ",";
      }
      line.back() = '}';
      out += line + "\n";
    }
  }
  return out;
}

std::vector<std::string> emit_results(const SweepResult& result, const SweepConfig& config, OutputFormat format,
                                      const std::string& path) {
  if (path.empty()) throw std::invalid_argument("emit_results: empty output path");
  const std::filesystem::path primary(path);
  if (primary.has_parent_path()) std::filesystem::create_directories(primary.parent_path());

  std::vector<std::string> written;
  nlohmann::ordered_json tables = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < result.tables.size(); ++k) {
    const auto& table = result.tables[k];
    const auto target = k == 0 ? primary : secondary_path(primary, table.name);
    write_file(target, render_table(table, config, format));
    written.push_back(target.string());
    tables.push_back({{"name", table.name}, {"path", target.filename().string()}, {"rows", table.rows.size()}});
  }

  nlohmann::ordered_json meta;
  meta["tool"] = "holeqst";
  meta["version"] = tool_version();
  meta["sweep"] = to_string(config.kind);
  meta["config_hash"] = config.hash();
  meta["seed"] = config.seed;
  meta["format"] = to_string(format);
  meta["tables"] = tables;
  meta["config"] = nlohmann::ordered_json::parse(config.resolved_json());
  const std::filesystem::path meta_path = primary.string() + ".meta.json";
  write_file(meta_path, meta.dump(2) + "\n");
  written.push_back(meta_path.string());
  return written;
}

}  // namespace holeqst
