#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcorr/discord.hpp"
#include "qcorr/qstate.hpp"
#include "qcorr/rsp.hpp"
#include "qcorr/state_io.hpp"
#include "qcorr/states.hpp"
#include "qcorr/tomo.hpp"

namespace py = pybind11;
using namespace qcorr;

namespace {

TwoQubitState state_from(const Mat4c& m) { return TwoQubitState(m); }

py::dict report_dict(const DiscordReport& r) {
  py::dict d;
  d["value"] = r.value;
  d["k_max"] = r.k_max;
  d["special_class"] = r.special_class;
  d["kappa"] = r.kappa;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-qubit correlations, geometric discord and remote state preparation";

  auto state_error = py::register_exception<StateError>(m, "StateError", PyExc_ValueError);
  py::register_exception<NotHermitianError>(m, "NotHermitianError", state_error);
  py::register_exception<NotUnitTraceError>(m, "NotUnitTraceError", state_error);
  py::register_exception<NotAStateError>(m, "NotAStateError", state_error);
  py::register_exception<InvalidWeightsError>(m, "InvalidWeightsError", PyExc_ValueError);
  py::register_exception<NotInSpecialClassError>(m, "NotInSpecialClassError", PyExc_ValueError);
  py::register_exception<ZeroProbabilityBranchError>(m, "ZeroProbabilityBranchError", PyExc_ValueError);
  py::register_exception<MalformedStateFileError>(m, "MalformedStateFileError", PyExc_ValueError);

  py::class_<TwoQubitState>(m, "TwoQubitState")
      .def(py::init(&state_from), py::arg("matrix"))
      .def_property_readonly("matrix", &TwoQubitState::matrix)
      .def("spectrum", &TwoQubitState::spectrum)
      .def("__repr__", [](const TwoQubitState& s) { return "TwoQubitState(purity=" + std::to_string(purity(s)) + ")"; });

  py::class_<BlochRep>(m, "BlochRep")
      .def(py::init<>())
      .def(py::init([](const Vec3& a, const Vec3& b, const Mat3& E) { return BlochRep{a, b, E}; }), py::arg("a"),
           py::arg("b"), py::arg("E"))
      .def_readwrite("a", &BlochRep::a)
      .def_readwrite("b", &BlochRep::b)
      .def_readwrite("E", &BlochRep::E);

  m.def("to_bloch", &to_bloch);
  m.def("from_bloch", &from_bloch);
  m.def("purity", &purity);
  m.def("state_fidelity", &state_fidelity);
  m.def("concurrence", &concurrence);
  m.def("mutual_information", &mutual_information);
  m.def("schmidt_singular_values", [](const Mat3& E) { return schmidt_canonical(E).singular_values; });
  m.def("apply_local_rotation", &apply_local_rotation, py::arg("state"), py::arg("rot_a"), py::arg("rot_b"));

  m.def("werner", &werner, py::arg("lam"));
  m.def("rho_b", &rho_b, py::arg("k"), py::arg("t"));
  m.def("bell", [](const std::string& kind) { return bell(parse_bell_kind(kind)); }, py::arg("kind"));
  m.def("maximally_mixed", &maximally_mixed);
  m.def("zero_discord", &zero_discord, py::arg("p"), py::arg("v"), py::arg("rho1"), py::arg("rho2"));
  m.def("random_state", &random_state, py::arg("seed"), py::arg("rank") = 4);
  m.def("random_zero_discord", &random_zero_discord, py::arg("seed"));
  m.def("random_isotropic", &random_isotropic, py::arg("seed"));
  m.def("random_maximally_mixed_marginals", &random_maximally_mixed_marginals, py::arg("seed"));

  m.def("geometric_discord", [](const TwoQubitState& s) { return report_dict(geometric_discord(s)); });
  m.def("discord_special_form", &discord_special_form);
  m.def(
      "geometric_discord_oracle",
      [](const TwoQubitState& s, int restarts, std::uint64_t seed) {
        DiscordOracleOptions o;
        o.restarts = restarts;
        o.seed = seed;
        return geometric_discord_oracle(s, o);
      },
      py::arg("state"), py::arg("restarts") = 50, py::arg("seed") = 0);

  m.def("rsp_fidelity", py::overload_cast<const TwoQubitState&>(&rsp_fidelity));
  m.def("rsp_fidelity_oracle", &rsp_fidelity_oracle, py::arg("state"), py::arg("grid_points") = 10000);
  m.def("average_payoff", py::overload_cast<const TwoQubitState&, const Vec3&>(&average_payoff), py::arg("state"),
        py::arg("beta"));
  m.def("optimal_payoff", [](const TwoQubitState& s, const Vec3& target) { return optimal_payoff(to_bloch(s), target); },
        py::arg("state"), py::arg("target"));
  m.def("payoff_given_alpha",
        py::overload_cast<const TwoQubitState&, const Vec3&, const Vec3&, const Vec3&>(&payoff_given_alpha),
        py::arg("state"), py::arg("alpha"), py::arg("beta"), py::arg("target"));
  m.def("ensemble_state", py::overload_cast<const TwoQubitState&, const Vec3&, const Vec3&>(&ensemble_state),
        py::arg("state"), py::arg("alpha"), py::arg("beta"));
  m.def("fibonacci_sphere", &fibonacci_sphere, py::arg("n"));
  m.def(
      "sweep",
      [](const TwoQubitState& s, int targets, std::uint64_t shots, std::uint64_t seed) {
        py::list rows;
        for (const auto& r : sweep(s, fibonacci_sphere(targets), shots, seed).records) {
          py::dict d;
          d["target_index"] = r.target_index;
          d["target"] = r.target;
          d["beta"] = r.beta;
          d["payoff_analytic"] = r.payoff_analytic;
          d["payoff_mc"] = r.payoff_mc;
          d["stderr"] = r.stderr_mc;
          d["shots"] = r.shots;
          rows.append(d);
        }
        return rows;
      },
      py::arg("state"), py::arg("targets") = 58, py::arg("shots") = 100000, py::arg("seed") = 1);

  m.def(
      "reconstruct_from_counts",
      [](const TwoQubitState& s, double mean_total, std::uint64_t seed) {
        return linear_inversion(measure_state(s, mean_total, seed)).state;
      },
      py::arg("state"), py::arg("mean_total"), py::arg("seed") = 1);

  m.def("state_to_json", [](const TwoQubitState& s, bool bloch) {
    return state_to_json(s, bloch ? StateEncoding::bloch : StateEncoding::matrix);
  }, py::arg("state"), py::arg("bloch") = false);
  m.def("parse_state_json", &parse_state_json);
}
