// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "metroscope/circuits.hpp"
#include "metroscope/experiments.hpp"
#include "metroscope/fisher.hpp"
#include "metroscope/haar.hpp"
#include "metroscope/interferometer.hpp"
#include "metroscope/loss.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace metroscope;

namespace {

// Two-mode states arrive as amplitude vectors or density matrices over D_0..D_N.
SymmetricState two_mode(const CVector& psi)
{
    return SymmetricState::pure(DickeBasis(static_cast<int>(psi.size()) - 1, 2), psi);
}

SymmetricState two_mode(const CMatrix& rho)
{
    return SymmetricState::density(DickeBasis(static_cast<int>(rho.rows()) - 1, 2), rho);
}

Axis parse_axis(const std::string& name)
{
    if (name == "x") {
        return Axis::x;
    }
    if (name == "y") {
        return Axis::y;
    }
    if (name == "z") {
        return Axis::z;
    }
    throw ArgumentError("axis must be x, y or z");
}

py::object cell(const experiments::Cell& c)
{
    return std::visit([](const auto& v) { return py::cast(v); }, c);
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Quantum Fisher information of random symmetric states";

    // translators registered later are tried first, so subclasses follow the base
    const py::exception<Error>& error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", error.ptr());
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<NumericalDomainError>(m, "NumericalDomainError", error.ptr());

    m.def("sym_dim", &sym_dim, py::arg("particles"), py::arg("modes"));
    m.def("full_dim", &full_dim, py::arg("particles"), py::arg("modes"));

    m.def("angular_momentum", [](const std::string& axis, int n) { return angular_momentum(parse_axis(axis), n).matrix(); },
          py::arg("axis"), py::arg("particles"), "J_x, J_y or J_z on the symmetric space of N qubits");
    m.def("beam_splitter", &beam_splitter, py::arg("particles"));
    m.def("sym_power_lift", &sym_power_lift, py::arg("v"), py::arg("particles"),
          "action of v^{(x)N} on the symmetric subspace");
    m.def("collective_sym", [](const CMatrix& h, int n) { return collective_sym(LocalHamiltonian(h), n).matrix(); },
          py::arg("h"), py::arg("particles"));

    m.def("qfi", [](const CVector& psi, const CMatrix& h) { return qfi_pure(psi, h); }, py::arg("state"),
          py::arg("h"));
    m.def("qfi", [](const CMatrix& rho, const CMatrix& h) { return qfi_density(rho, h); }, py::arg("state"),
          py::arg("h"));
    m.def(
        "fidelity",
        [](const CMatrix& rho, const CMatrix& sigma) { return fidelity_bures(rho, sigma).fidelity; },
        py::arg("rho"), py::arg("sigma"));
    m.def(
        "lambda_of_spectrum",
        [](const std::vector<double>& p) {
            const Spectrum s(p);
            return lambda_of_spectrum(s, s.size()).lambda;
        },
        py::arg("spectrum"));
    m.def(
        "compact_average_qfi",
        [](const std::vector<double>& p, const CMatrix& h) { return compact_average_qfi(Spectrum(p), h); },
        py::arg("spectrum"), py::arg("h"));
    m.def(
        "loss_avg_bounds",
        [](int n, int k, double purity) {
            const Bounds b = loss_avg_bounds(n, k, purity);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("particles"), py::arg("lost"), py::arg("purity") = 1.0);
    m.def(
        "fi_avg_bounds",
        [](int n) {
            const Bounds b = fi_avg_bounds(n);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("particles"));
    m.def("lu_upper_bound", &lu_upper_bound, py::arg("particles"), py::arg("modes"), py::arg("h_norm"));

    m.def(
        "partial_trace",
        [](const CVector& psi, int k) { return partial_trace_dicke(two_mode(psi), k).density_matrix(); },
        py::arg("state"), py::arg("lost"), "trace out k particles of a two-mode symmetric state");
    m.def(
        "partial_trace",
        [](const CMatrix& rho, int k) { return partial_trace_dicke(two_mode(rho), k).density_matrix(); },
        py::arg("state"), py::arg("lost"));

    m.def(
        "mz_probabilities", [](const CVector& psi, double phi) { return mz_probabilities(two_mode(psi), phi); },
        py::arg("state"), py::arg("phi"));
    m.def(
        "mz_probabilities", [](const CMatrix& rho, double phi) { return mz_probabilities(two_mode(rho), phi); },
        py::arg("state"), py::arg("phi"));
    m.def(
        "mz_fi", [](const CVector& psi, double phi) { return mz_fi(two_mode(psi), phi); }, py::arg("state"),
        py::arg("phi"));
    m.def(
        "mz_fi", [](const CMatrix& rho, double phi) { return mz_fi(two_mode(rho), phi); }, py::arg("state"),
        py::arg("phi"));

    m.def(
        "haar_unitary",
        [](Index dim, std::uint64_t seed) {
            Rng rng(seed);
            return haar_unitary(dim, rng);
        },
        py::arg("dim"), py::arg("seed"));
    m.def(
        "haar_state",
        [](Index dim, std::uint64_t seed) {
            Rng rng(seed);
            return haar_state(dim, rng);
        },
        py::arg("dim"), py::arg("seed"));

    m.def(
        "random_circuit_state",
        [](int n, int depth, const std::string& start, std::uint64_t seed) {
            Rng rng(seed);
            const Circuit c = sample_circuit(n, depth, rng);
            std::vector<std::string> gates;
            for (const Gate& g : c.gates) {
                gates.push_back(to_string(g));
            }
            return py::make_tuple(apply_circuit(start_state(parse_start_state(start), n), c).amplitudes(), gates);
        },
        py::arg("particles"), py::arg("depth"), py::arg("start") = "balanced", py::arg("seed") = 0,
        "state after a random circuit, with the gate names applied in order");

    m.def("experiment_names", [] {
        std::vector<std::string> names;
        for (const experiments::Info& i : experiments::catalogue()) {
            names.push_back(i.name);
        }
        return names;
    });
    m.def(
        "experiment_defaults", [](const std::string& name) { return experiments::info(name).defaults.dump(); },
        py::arg("name"));
    m.def(
        "run_experiment",
        [](const std::string& name, const std::string& params_json, int workers) {
            const experiments::Json params =
                experiments::resolve_parameters(name, experiments::Json::parse(params_json), experiments::Json());
            experiments::Result r;
            {
                py::gil_scoped_release release;
                r = experiments::run(name, params, workers);
            }
            py::list rows;
            for (const auto& row : r.table.rows) {
                py::list out;
                for (const auto& c : row) {
                    out.append(cell(c));
                }
                rows.append(py::tuple(out));
            }
            py::list checks;
            for (const experiments::Check& c : r.checks) {
                checks.append(py::dict(py::arg("name") = c.name, py::arg("passed") = c.passed,
                                       py::arg("soft") = c.soft, py::arg("detail") = c.detail));
            }
            std::ostringstream csv;
            experiments::write_csv(csv, r.table);
            return py::dict(py::arg("columns") = r.table.columns, py::arg("rows") = rows, py::arg("checks") = checks,
                            py::arg("csv") = csv.str());
        },
        py::arg("name"), py::arg("params_json") = "{}", py::arg("workers") = 0);

    m.attr("__version__") = experiments::version();
}
