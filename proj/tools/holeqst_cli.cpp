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

// Command-line front end: one subcommand per sweep kind.
//
// Seed precedence: --seed, then the HOLEQST_SEED environment variable, then
// the "seed" entry of the config file, then 0.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "holeqst/config.hpp"
#include "holeqst/linalg.hpp"
#include "holeqst/sweep.hpp"
#include "json.hpp"

namespace {

int fail(const std::string& type, const std::string& message, int code) {
  nlohmann::ordered_json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::cerr << err.dump() << "\n";
  return code;
}

std::uint64_t parse_seed(const std::string& text, const char* source) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw std::invalid_argument(std::string(source) + ": not an unsigned 64-bit integer: '" + text + "'");
  }
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-chain state transfer sweeps", "holeqst"};
  app.set_version_flag("--version", holeqst::tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, output_path, format_name, seed_text;
  int workers = 1;
  bool no_two_pi = false;
  app.add_option("-c,--config", config_path, "JSON config file (defaults are used when omitted)")
      ->check(CLI::ExistingFile);
  app.add_option("-o,--output", output_path, "Primary output file; stdout when omitted");
  app.add_option("-w,--workers", workers, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("-s,--seed", seed_text, "Seed override (takes precedence over HOLEQST_SEED)");
  app.add_option("-f,--format", format_name, "Output format")->check(CLI::IsMember({"csv", "jsonl", "json-lines"}));
  app.add_flag("--no-two-pi", no_two_pi, "Propagate with exp(-iHt) instead of exp(-2 pi iHt)");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"theta", "Peak fidelity over spin-orbit angle and axis"},
      {"axis", "Peak fidelity over the (n_x, n_z) axis grid"},
      {"size", "Peak fidelity over chain length"},
      {"field", "Theta sweeps repeated per magnetic field, with peak locations"},
      {"trace", "Sampled F(t) for several specs on one time grid"},
      {"noise", "Disorder-averaged fidelity under quasi-static exchange noise"},
      {"analytics", "Detuning, two-spin frequencies and effective two-level couplings"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    const auto kind = holeqst::sweep_kind_from_string(name);
    holeqst::SweepConfig config =
        config_path.empty() ? holeqst::default_config(kind) : holeqst::load_config(config_path, kind);

    if (!seed_text.empty()) {
      config.seed = parse_seed(seed_text, "--seed");
    } else if (const char* env = std::getenv("HOLEQST_SEED"); env != nullptr && *env != '\0') {
      config.seed = parse_seed(env, "HOLEQST_SEED");
    }
    if (no_two_pi) config.time.phase = holeqst::PhaseConvention::Unity;
    if (!format_name.empty()) config.format = holeqst::output_format_from_string(format_name);
    if (!output_path.empty()) config.output_path = output_path;
    config.validate();

    const auto result = holeqst::run_sweep(config, {workers});
    if (config.output_path.empty()) {
      std::cout << holeqst::render_table(result.tables.front(), config, config.format);
    } else {
      for (const auto& path : holeqst::emit_results(result, config, config.format, config.output_path)) {
        std::cerr << "wrote " << path << "\n";
      }
    }
  } catch (const holeqst::InstanceTooLarge& e) {
    return fail("instance-too-large", e.what(), 3);
  } catch (const std::invalid_argument& e) {
    return fail("invalid-argument", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
  return 0;
}
