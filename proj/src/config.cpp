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

#include "holeqst/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace holeqst {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw std::invalid_argument(std::string(where) + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw std::invalid_argument(std::string(where) + ": unknown key '" + item.key() + "'");
  }
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw std::invalid_argument(std::string(what) + ": expected a number");
  return j.get<double>();
}

Vector3 read_vec3(const json& j, const char* what) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "x") return Vector3::UnitX();
    if (name == "y") return Vector3::UnitY();
    if (name == "z") return Vector3::UnitZ();
    throw std::invalid_argument(std::string(what) + ": unknown axis name '" + name + "'");
  }
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument(std::string(what) + ": expected [x, y, z]");
  return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

// A scalar means scalar * identity, three numbers a diagonal, else 3x3 rows.
Matrix3 read_matrix3(const json& j, const char* what) {
  if (j.is_number()) return Matrix3::Identity() * j.get<double>();
  if (j.is_array() && j.size() == 3 && j[0].is_number()) return read_vec3(j, what).asDiagonal();
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument(std::string(what) + ": expected a 3x3 matrix");
  Matrix3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = read_vec3(j[static_cast<size_t>(r)], what).transpose();
  return m;
}

std::vector<double> linspace(double start, double stop, int count) {
  std::vector<double> out(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<size_t>(i)] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  }
  return out;
}

std::vector<double> read_list(const json& j, const char* what) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(number(v, what));
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
  }
  check_keys(j, what, {"start", "stop", "count", "step"});
  const double start = number(j.at("start"), what);
  const double stop = number(j.at("stop"), what);
  int count;
  if (j.contains("count")) {
    count = j.at("count").get<int>();
  } else {
    const double step = number(j.at("step"), what);
    if (!(step > 0.0)) throw std::invalid_argument(std::string(what) + ": step must be positive");
    count = static_cast<int>(std::lround((stop - start) / step)) + 1;
  }
  if (count < 1) throw std::invalid_argument(std::string(what) + ": empty range");
  return linspace(start, stop, count);
}

json vec_json(const Vector3& v) { return json::array({v.x(), v.y(), v.z()}); }

json matrix_json(const Matrix3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return rows;
}

json axis_json(const AxisEntry& a) {
  return {{"input", vec_json(a.raw)}, {"normalized", vec_json(a.axis.vector())}, {"input_norm", a.raw_norm}};
}

OrientationEntry read_orientation(const json& j, const char* what, const std::string& fallback_label) {
  check_keys(j, what, {"label", "theta_over_pi", "axis", "B_mhz"});
  OrientationEntry e;
  e.label = j.value("label", fallback_label);
  e.theta_over_pi = number(j.at("theta_over_pi"), what);
  e.axis = AxisEntry::from_raw(j.contains("axis") ? read_vec3(j.at("axis"), what) : Vector3::UnitZ());
  if (j.contains("B_mhz")) e.B = read_vec3(j.at("B_mhz"), what);
  return e;
}

json orientation_json(const OrientationEntry& e) {
  json out = {{"label", e.label}, {"theta_over_pi", e.theta_over_pi}, {"axis", axis_json(e.axis)}};
  if (e.B) out["B_mhz"] = vec_json(*e.B);
  return out;
}

std::vector<AxisEntry> default_axes() {
  std::vector<AxisEntry> out;
  for (const Vector3& v : {Vector3(1, 0, 0), Vector3(0, 1, 0), Vector3(0, 0, 1), Vector3(0.5, 0.5, 0.707),
                           Vector3(0.707, 0.5, 0.5)}) {
    out.push_back(AxisEntry::from_raw(v));
  }
  return out;
}

void fill_defaults(SweepConfig& c) {
  auto& g = c.grid;
  const auto tilted = AxisEntry::from_raw({0.5, 0.5, 0.707});
  const auto zhat = AxisEntry::from_raw(Vector3::UnitZ());
  switch (c.kind) {
    case SweepKind::Theta:
    case SweepKind::Field:
      if (g.theta_over_pi.empty()) g.theta_over_pi = linspace(0.0, 2.0, 201);
      if (g.axes.empty()) g.axes = default_axes();
      if (c.kind == SweepKind::Field && g.fields.empty()) {
        for (double b : {0.0, 50.0, 1000.0}) g.fields.push_back(b * Vector3::UnitZ());
      }
      break;
    case SweepKind::AxisGrid:
      if (g.theta_over_pi.empty()) g.theta_over_pi = {0.4, 0.55};
      if (g.n_x.empty()) g.n_x = linspace(-1.0, 1.0, 41);
      if (g.n_z.empty()) g.n_z = linspace(-1.0, 1.0, 41);
      break;
    case SweepKind::Size:
      if (g.sizes.empty()) g.sizes = {4, 5, 6, 7, 8, 9, 10, 11};
      if (g.branches.empty()) g.branches = {{"isotropic", 0.0, zhat, {}}, {"anisotropic", 0.3, tilted, {}}};
      break;
    case SweepKind::TimeTrace:
      if (g.traces.empty()) {
        g.traces = {{"isotropic", 0.0, zhat, {}}, {"tilted", 0.3, tilted, {}}, {"aligned", 0.3, zhat, {}}};
      }
      break;
    case SweepKind::Noise:
    case SweepKind::Analytics:
      break;
  }
}

}  // namespace

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::Theta: return "theta";
    case SweepKind::AxisGrid: return "axis-grid";
    case SweepKind::Size: return "size";
    case SweepKind::Field: return "field";
    case SweepKind::Noise: return "noise";
    case SweepKind::TimeTrace: return "time-trace";
    case SweepKind::Analytics: return "analytics";
  }
  return "?";
}

SweepKind sweep_kind_from_string(const std::string& name) {
  for (auto k : {SweepKind::Theta, SweepKind::AxisGrid, SweepKind::Size, SweepKind::Field, SweepKind::Noise,
                 SweepKind::TimeTrace, SweepKind::Analytics}) {
    if (to_string(k) == name) return k;
  }
  if (name == "axis") return SweepKind::AxisGrid;
  if (name == "trace") return SweepKind::TimeTrace;
  throw std::invalid_argument("unknown sweep kind '" + name + "'");
}

std::string to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "jsonl"; }

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "jsonl" || name == "json-lines") return OutputFormat::JsonLines;
  throw std::invalid_argument("unknown output format '" + name + "'");
}

AxisEntry AxisEntry::from_raw(const Vector3& raw) {
  return {raw, SpinOrbitAxis::normalized(raw), raw.norm()};
}

void SweepConfig::validate() const {
  base.validate();
  time.validate();
  const auto& g = grid;
  auto need = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + msg);
  };
  switch (kind) {
    case SweepKind::Theta:
      need(!g.theta_over_pi.empty() && !g.axes.empty(), "theta sweep needs theta values and axes");
      break;
    case SweepKind::Field:
      need(!g.theta_over_pi.empty() && !g.axes.empty() && !g.fields.empty(),
           "field sweep needs theta values, axes and fields");
      break;
    case SweepKind::AxisGrid:
      need(!g.theta_over_pi.empty() && !g.n_x.empty() && !g.n_z.empty(), "axis grid needs theta, n_x and n_z");
      break;
    case SweepKind::Size:
      need(!g.sizes.empty() && !g.branches.empty(), "size sweep needs sizes and branches");
      break;
    case SweepKind::TimeTrace:
      need(!g.traces.empty(), "time trace needs at least one trace");
      break;
    case SweepKind::Noise:
      need(!g.noise.kinds.empty() && !g.noise.strengths.empty() && !g.noise.split_targets.empty(),
           "noise sweep needs kinds, strengths and split targets");
      for (double s : g.noise.strengths) need(s >= 0.0 && std::isfinite(s), "noise strengths must be >= 0");
      need(g.noise.realizations >= 1, "noise realizations must be >= 1");
      break;
    case SweepKind::Analytics:
      break;
  }
}

std::string SweepConfig::resolved_json() const {
  json chain = {{"L", base.L},
                {"J0_mhz", base.J0},
                {"j0_mhz", base.j0},
                {"theta_over_pi", base.theta / std::numbers::pi},
                {"axis", axis_json(base_axis)},
                {"B_mhz", vec_json(base.B)},
                {"g_boundary", matrix_json(base.g_boundary)},
                {"g_channel", matrix_json(base.g_channel)},
                {"init", to_string(base.init)}};
  json g = json::object();
  const auto& sg = grid;
  if (!sg.theta_over_pi.empty()) g["theta_over_pi"] = sg.theta_over_pi;
  if (kind == SweepKind::Theta || kind == SweepKind::Field) g["commensurate"] = sg.append_commensurate;
  if (!sg.axes.empty()) {
    g["axes"] = json::array();
    for (const auto& a : sg.axes) g["axes"].push_back(axis_json(a));
  }
  if (!sg.n_x.empty()) g["n_x"] = sg.n_x;
  if (!sg.n_z.empty()) g["n_z"] = sg.n_z;
  if (!sg.sizes.empty()) g["sizes"] = sg.sizes;
  if (!sg.branches.empty()) {
    g["branches"] = json::array();
    for (const auto& b : sg.branches) g["branches"].push_back(orientation_json(b));
  }
  if (!sg.fields.empty()) {
    g["fields_mhz"] = json::array();
    for (const auto& b : sg.fields) g["fields_mhz"].push_back(vec_json(b));
    g["peak_threshold"] = sg.peak_threshold;
  }
  if (!sg.traces.empty()) {
    g["traces"] = json::array();
    for (const auto& t : sg.traces) g["traces"].push_back(orientation_json(t));
  }
  if (kind == SweepKind::Noise) {
    json kinds = json::array(), targets = json::array();
    for (auto k : sg.noise.kinds) kinds.push_back(to_string(k));
    for (auto t : sg.noise.split_targets) targets.push_back(to_string(t));
    g["noise"] = {{"kinds", kinds},
                  {"split_targets", targets},
                  {"strengths", sg.noise.strengths},
                  {"distribution", to_string(sg.noise.distribution)},
                  {"realizations", sg.noise.realizations},
                  {"curves", sg.noise.emit_curves}};
  }
  json out = {{"sweep", to_string(kind)},
              {"chain", chain},
              {"time",
               {{"window_us", time.window_us},
                {"points", time.points},
                {"two_pi", time.phase == PhaseConvention::TwoPi}}},
              {"grid", g},
              {"seed", seed},
              {"output", {{"path", output_path}, {"format", to_string(format)}}}};
  return out.dump(2);
}

std::string SweepConfig::hash() const {
  // Output path and format do not change any computed value.
  SweepConfig stripped = *this;
  stripped.output_path.clear();
  stripped.format = OutputFormat::Csv;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : stripped.resolved_json()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SweepConfig default_config(SweepKind kind) {
  SweepConfig c;
  c.kind = kind;
  c.base_axis = AxisEntry::from_raw(c.base.axis.vector());
  fill_defaults(c);
  return c;
}

SweepConfig parse_config(const std::string& text, std::optional<SweepKind> kind_override) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  check_keys(root, "config", {"sweep", "chain", "time", "grid", "seed", "output"});

  SweepConfig c;
  if (kind_override) c.kind = *kind_override;
  else if (root.contains("sweep")) c.kind = sweep_kind_from_string(root.at("sweep").get<std::string>());

  try {
    if (root.contains("chain")) {
      const auto& ch = root.at("chain");
      check_keys(ch, "chain", {"L", "J0_mhz", "j0_mhz", "theta_over_pi", "axis", "B_mhz", "g_boundary", "g_channel",
                               "init"});
      c.base.L = ch.value("L", c.base.L);
      c.base.J0 = ch.value("J0_mhz", c.base.J0);
      c.base.j0 = ch.value("j0_mhz", c.base.j0);
      c.base.theta = ch.value("theta_over_pi", 0.0) * std::numbers::pi;
      if (ch.contains("axis")) c.base_axis = AxisEntry::from_raw(read_vec3(ch.at("axis"), "chain.axis"));
      if (ch.contains("B_mhz")) c.base.B = read_vec3(ch.at("B_mhz"), "chain.B_mhz");
      if (ch.contains("g_boundary")) c.base.g_boundary = read_matrix3(ch.at("g_boundary"), "chain.g_boundary");
      if (ch.contains("g_channel")) c.base.g_channel = read_matrix3(ch.at("g_channel"), "chain.g_channel");
      if (ch.contains("init")) c.base.init = channel_init_from_string(ch.at("init").get<std::string>());
    }
    c.base.axis = c.base_axis.axis;

    if (root.contains("time")) {
      const auto& t = root.at("time");
      check_keys(t, "time", {"window_us", "points", "two_pi"});
      c.time.window_us = t.value("window_us", c.time.window_us);
      c.time.points = t.value("points", c.time.points);
      if (!t.value("two_pi", true)) c.time.phase = PhaseConvention::Unity;
    }

    if (root.contains("grid")) {
      const auto& g = root.at("grid");
      check_keys(g, "grid", {"theta_over_pi", "commensurate", "axes", "n_x", "n_z", "sizes", "branches", "fields_mhz",
                             "field_direction", "peak_threshold", "traces", "noise"});
      auto& sg = c.grid;
      if (g.contains("theta_over_pi")) sg.theta_over_pi = read_list(g.at("theta_over_pi"), "grid.theta_over_pi");
      sg.append_commensurate = g.value("commensurate", true);
      if (g.contains("axes")) {
        for (const auto& a : g.at("axes")) sg.axes.push_back(AxisEntry::from_raw(read_vec3(a, "grid.axes")));
      }
      if (g.contains("n_x")) sg.n_x = read_list(g.at("n_x"), "grid.n_x");
      if (g.contains("n_z")) sg.n_z = read_list(g.at("n_z"), "grid.n_z");
      if (g.contains("sizes")) {
        for (double L : read_list(g.at("sizes"), "grid.sizes")) sg.sizes.push_back(static_cast<int>(std::lround(L)));
      }
      if (g.contains("branches")) {
        int i = 0;
        for (const auto& b : g.at("branches")) {
          sg.branches.push_back(read_orientation(b, "grid.branches", "branch" + std::to_string(i++)));
        }
      }
      if (g.contains("fields_mhz")) {
        const Vector3 dir = g.contains("field_direction")
                                ? read_vec3(g.at("field_direction"), "grid.field_direction").normalized()
                                : Vector3::UnitZ();
        for (const auto& b : g.at("fields_mhz")) {
          sg.fields.push_back(b.is_number() ? Vector3(b.get<double>() * dir) : read_vec3(b, "grid.fields_mhz"));
        }
      }
      sg.peak_threshold = g.value("peak_threshold", sg.peak_threshold);
      if (g.contains("traces")) {
        int i = 0;
        for (const auto& t : g.at("traces")) {
          sg.traces.push_back(read_orientation(t, "grid.traces", "trace" + std::to_string(i++)));
        }
      }
      if (g.contains("noise")) {
        const auto& n = g.at("noise");
        check_keys(n, "grid.noise", {"kinds", "split_targets", "strengths", "distribution", "realizations", "curves"});
        if (n.contains("kinds")) {
          sg.noise.kinds.clear();
          for (const auto& k : n.at("kinds")) sg.noise.kinds.push_back(noise_kind_from_string(k.get<std::string>()));
        }
        if (n.contains("split_targets")) {
          sg.noise.split_targets.clear();
          for (const auto& t : n.at("split_targets")) {
            sg.noise.split_targets.push_back(split_target_from_string(t.get<std::string>()));
          }
        }
        if (n.contains("strengths")) sg.noise.strengths = read_list(n.at("strengths"), "grid.noise.strengths");
        if (n.contains("distribution")) {
          sg.noise.distribution = noise_distribution_from_string(n.at("distribution").get<std::string>());
        }
        sg.noise.realizations = n.value("realizations", sg.noise.realizations);
        sg.noise.emit_curves = n.value("curves", sg.noise.emit_curves);
      }
    }

    if (root.contains("seed")) c.seed = root.at("seed").get<std::uint64_t>();
    if (root.contains("output")) {
      const auto& o = root.at("output");
      check_keys(o, "output", {"path", "format"});
      c.output_path = o.value("path", std::string());
      if (o.contains("format")) c.format = output_format_from_string(o.at("format").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  fill_defaults(c);
  c.validate();
  return c;
}

SweepConfig load_config(const std::string& path, std::optional<SweepKind> kind_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), kind_override);
}

}  // namespace holeqst
