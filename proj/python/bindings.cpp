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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "holeqst/analytics.hpp"
#include "holeqst/dynamics.hpp"
#include "holeqst/model.hpp"
#include "holeqst/noise.hpp"
#include "holeqst/sweep.hpp"

namespace py = pybind11;
using namespace holeqst;

namespace {

TimeGrid make_grid(double window_us, int points, bool two_pi) {
  return {window_us, points, two_pi ? PhaseConvention::TwoPi : PhaseConvention::Unity};
}

ExchangeTensor tensor(const Matrix3& j) { return {j}; }

py::object cell_to_python(const Cell& c) {
  return std::visit(
      [](const auto& v) -> py::object {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return py::none();
        } else {
          return py::cast(v);
        }
      },
      c);
}

py::dict tables_to_python(const SweepResult& result) {
  py::dict out;
  for (const auto& t : result.tables) {
    py::list rows;
    for (const auto& row : t.rows) {
      py::list r;
      for (const auto& c : row) r.append(cell_to_python(c));
      rows.append(r);
    }
    py::dict table;
    table["columns"] = t.columns;
    table["rows"] = rows;
    out[py::str(t.name)] = table;
  }
  return out;
}

std::optional<SweepKind> kind_or_none(const std::optional<std::string>& kind) {
  if (!kind) return std::nullopt;
  return sweep_kind_from_string(*kind);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact-diagonalization state transfer through spin-orbit-coupled spin chains";
  m.attr("__version__") = tool_version();

  py::register_exception<InstanceTooLarge>(m, "InstanceTooLarge", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<ChainSpec>(m, "ChainSpec")
      .def(py::init([](int L, double J0, double j0, double theta, const Vector3& axis, const Vector3& B,
                       const std::string& init) {
             ChainSpec s;
             s.L = L;
             s.J0 = J0;
             s.j0 = j0;
             s.theta = theta;
             s.axis = SpinOrbitAxis::normalized(axis);
             s.B = B;
             s.init = channel_init_from_string(init);
             s.validate();
             return s;
           }),
           py::kw_only(), py::arg("L") = 4, py::arg("J0") = 160.0, py::arg("j0") = 20.0, py::arg("theta") = 0.0,
           py::arg("axis") = Vector3::UnitZ(), py::arg("B") = Vector3::Zero(),
           py::arg("init") = "channel-ground-state")
      .def_readwrite("L", &ChainSpec::L)
      .def_readwrite("J0", &ChainSpec::J0)
      .def_readwrite("j0", &ChainSpec::j0)
      .def_readwrite("theta", &ChainSpec::theta)
      .def_property(
          "axis", [](const ChainSpec& s) { return s.axis.vector(); },
          [](ChainSpec& s, const Vector3& v) { s.axis = SpinOrbitAxis::normalized(v); })
      .def_readwrite("B", &ChainSpec::B)
      .def_readwrite("g_boundary", &ChainSpec::g_boundary)
      .def_readwrite("g_channel", &ChainSpec::g_channel)
      .def_property(
          "init", [](const ChainSpec& s) { return to_string(s.init); },
          [](ChainSpec& s, const std::string& v) { s.init = channel_init_from_string(v); })
      .def_readwrite("bond_scale", &ChainSpec::bond_scale)
      .def("validate", &ChainSpec::validate)
      .def("__repr__", [](const ChainSpec& s) {
        return "ChainSpec(L=" + std::to_string(s.L) + ", theta=" + format_real(s.theta) + ")";
      });

  py::class_<FidelitySeries>(m, "FidelitySeries")
      .def_readonly("times", &FidelitySeries::times)
      .def_readonly("values", &FidelitySeries::values)
      .def_readonly("t_max", &FidelitySeries::t_max)
      .def_readonly("f_max", &FidelitySeries::f_max)
      .def_readonly("degenerate", &FidelitySeries::degenerate);

  py::class_<TransportDoublet>(m, "TransportDoublet")
      .def_readonly("delta", &TransportDoublet::delta)
      .def_readonly("t_eff", &TransportDoublet::t_eff)
      .def_readonly("splitting", &TransportDoublet::splitting)
      .def_readonly("transfer_time", &TransportDoublet::transfer_time)
      .def_readonly("isolated", &TransportDoublet::isolated)
      .def_readonly("degenerate_channel", &TransportDoublet::degenerate_channel);

  py::class_<EffectiveTwoLevel>(m, "EffectiveTwoLevel")
      .def_readonly("T", &EffectiveTwoLevel::T)
      .def_readonly("G_diag", &EffectiveTwoLevel::G_diag)
      .def_readonly("G_diag_other", &EffectiveTwoLevel::G_diag_other)
      .def_readonly("predicted_frequency", &EffectiveTwoLevel::predicted_frequency);

  py::class_<DisorderAverage>(m, "DisorderAverage")
      .def_readonly("mean_curve", &DisorderAverage::mean_curve)
      .def_readonly("realization_f_max", &DisorderAverage::realization_f_max)
      .def_readonly("f_max_mean", &DisorderAverage::f_max_mean)
      .def_readonly("f_max_std", &DisorderAverage::f_max_std)
      .def_readonly("f_max_stderr", &DisorderAverage::f_max_stderr);

  m.def("rotation_matrix", [](const Vector3& axis, double theta) {
    return rotation_matrix(SpinOrbitAxis::normalized(axis), theta);
  }, py::arg("axis"), py::arg("theta"));
  m.def("rotation_exchange", [](double J0, const Vector3& axis, double theta) {
    return rotation_exchange(J0, SpinOrbitAxis::normalized(axis), theta).j;
  }, py::arg("J0"), py::arg("axis"), py::arg("theta"));
  m.def("commensurate_angles", &commensurate_angles, py::arg("L"), py::arg("max_n"));
  m.def("chain_hamiltonian", &build_chain_hamiltonian, py::arg("spec"));
  m.def("channel_hamiltonian", &build_channel_hamiltonian, py::arg("spec"));

  m.def("fidelity_series", [](const ChainSpec& spec, double window_us, int points, bool two_pi) {
    py::gil_scoped_release release;
    return fidelity_series(spec, make_grid(window_us, points, two_pi));
  }, py::arg("spec"), py::kw_only(), py::arg("window_us") = 10.0, py::arg("points") = 4001, py::arg("two_pi") = true);
  m.def("fidelity_at", [](const ChainSpec& spec, const std::vector<double>& times, bool two_pi) {
    const TransferFidelity f(spec, two_pi ? PhaseConvention::TwoPi : PhaseConvention::Unity);
    return f.sample(times);
  }, py::arg("spec"), py::arg("times"), py::kw_only(), py::arg("two_pi") = true);

  m.def("detuning_delta", [](const ChainSpec& spec, bool two_pi) {
    return detuning_delta(spec, two_pi ? PhaseConvention::TwoPi : PhaseConvention::Unity);
  }, py::arg("spec"), py::kw_only(), py::arg("two_pi") = true);
  m.def("van_vleck_effective", [](const Matrix3& channel, const Matrix3& end) {
    return van_vleck_effective(tensor(channel), tensor(end));
  }, py::arg("channel"), py::arg("end"));
  m.def("two_spin_closed_form", [](const Matrix3& j, double t_us, bool two_pi) {
    return ComplexVector(
        two_spin_closed_form(tensor(j), t_us, two_pi ? PhaseConvention::TwoPi : PhaseConvention::Unity).amplitudes());
  }, py::arg("J"), py::arg("t_us"), py::kw_only(), py::arg("two_pi") = true);

  m.def("disorder_averaged_fidelity",
        [](const ChainSpec& spec, const std::string& kind, double strength, std::uint64_t seed, int realizations,
           const std::string& distribution, const std::string& split_target, int points, int workers) {
          NoiseModel model;
          model.kind = noise_kind_from_string(kind);
          model.strength = strength;
          model.seed = seed;
          model.realizations = realizations;
          model.distribution = noise_distribution_from_string(distribution);
          model.split_target = split_target_from_string(split_target);
          py::gil_scoped_release release;
          return disorder_averaged_fidelity(spec, model, make_grid(10.0, points, true), workers);
        },
        py::arg("spec"), py::kw_only(), py::arg("kind"), py::arg("strength"), py::arg("seed") = 0,
        py::arg("realizations") = 200, py::arg("distribution") = "uniform", py::arg("split_target") = "both",
        py::arg("points") = 4001, py::arg("workers") = 1);

  m.def("run_sweep", [](const std::string& config_json, std::optional<std::string> kind, int workers) {
    const auto config = parse_config(config_json, kind_or_none(kind));
    SweepResult result;
    {
      py::gil_scoped_release release;
      result = run_sweep(config, {workers});
    }
    return tables_to_python(result);
  }, py::arg("config_json"), py::arg("kind") = py::none(), py::arg("workers") = 1,
     "Runs a sweep from JSON config text; returns {table name: {columns, rows}}.");
  m.def("config_hash", [](const std::string& config_json, std::optional<std::string> kind) {
    return parse_config(config_json, kind_or_none(kind)).hash();
  }, py::arg("config_json"), py::arg("kind") = py::none());
}
