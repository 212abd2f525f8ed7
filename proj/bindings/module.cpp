#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wc4dvar/harness.hpp"

namespace py = pybind11;
using namespace wc4dvar;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weak-constraint 4D-Var saddle point spectra: Lorenz 96 twin "
              "experiments, block operators, Krylov solvers, eigenvalue bounds";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<BlowupError>(m, "BlowupError", PyExc_ArithmeticError);
    py::register_exception<NotSpdError>(m, "NotSpdError", PyExc_ArithmeticError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init<>())
        .def_readwrite("n", &ModelConfig::n)
        .def_readwrite("forcing", &ModelConfig::forcing)
        .def_readwrite("dt", &ModelConfig::dt)
        .def_readwrite("steps", &ModelConfig::steps);

    py::class_<CovarianceSpec>(m, "CovarianceSpec")
        .def(py::init<>())
        .def_readwrite("sigma_b", &CovarianceSpec::sigma_b)
        .def_readwrite("length_scale", &CovarianceSpec::length_scale)
        .def_readwrite("sigma_o", &CovarianceSpec::sigma_o)
        .def_readwrite("dx", &CovarianceSpec::dx);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("states", &Trajectory::states);

    m.def("tendency", &tendency, py::arg("x"), py::arg("cfg"));
    m.def(
        "integrate",
        [](const State& x0, const ModelConfig& cfg) { return integrate(x0, cfg); },
        py::arg("x0"), py::arg("cfg"));
    m.def("soar_matrix", &soar_matrix, py::arg("n"), py::arg("spec"));

    py::class_<ObservationNetwork>(m, "ObservationNetwork")
        .def(py::init<int, std::vector<std::vector<int>>>(), py::arg("state_dim"),
             py::arg("observed"))
        .def_property_readonly("p", &ObservationNetwork::total_obs)
        .def("rows", &ObservationNetwork::rows)
        .def("contains", &ObservationNetwork::contains);
    m.def("named_network", &named_network, py::arg("id"), py::arg("n"), py::arg("N"));

    py::enum_<Formulation>(m, "Formulation")
        .value("A3", Formulation::A3)
        .value("A2", Formulation::A2)
        .value("A1", Formulation::A1);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("model", &ExperimentConfig::model)
        .def_readwrite("covariance", &ExperimentConfig::covariance)
        .def_readwrite("network_id", &ExperimentConfig::network_id)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("solver", &ExperimentConfig::solver)
        .def_readwrite("spinup_steps", &ExperimentConfig::spinup_steps)
        .def_static("from_json_file", &ExperimentConfig::from_json_file);

    py::class_<TwinData>(m, "TwinData")
        .def_readonly("truth", &TwinData::truth)
        .def_readonly("background", &TwinData::background)
        .def_readonly("forecast", &TwinData::forecast)
        .def_readonly("observations", &TwinData::observations)
        .def_readonly("b", &TwinData::b)
        .def_readonly("d", &TwinData::d);
    m.def("run_twin", &run_twin, py::arg("cfg"));

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("eigenvalues", &Spectrum::eigenvalues)
        .def_readonly("n_plus", &Spectrum::n_plus)
        .def_readonly("n_minus", &Spectrum::n_minus)
        .def_readonly("n_zero", &Spectrum::n_zero);
    m.def("sym_eig", &sym_eig, py::arg("A"));

    py::class_<SpectralSummary>(m, "SpectralSummary")
        .def_readonly("psi_min", &SpectralSummary::psi_min)
        .def_readonly("psi_max", &SpectralSummary::psi_max)
        .def_readonly("nu_min", &SpectralSummary::nu_min)
        .def_readonly("nu_max", &SpectralSummary::nu_max)
        .def_readonly("rho_min", &SpectralSummary::rho_min)
        .def_readonly("rho_max", &SpectralSummary::rho_max)
        .def_readonly("theta_min", &SpectralSummary::theta_min)
        .def_readonly("theta_max", &SpectralSummary::theta_max)
        .def_readonly("sigma_min", &SpectralSummary::sigma_min)
        .def_readonly("sigma_max", &SpectralSummary::sigma_max)
        .def_readonly("tau_min", &SpectralSummary::tau_min)
        .def_readonly("tau_max", &SpectralSummary::tau_max);

    py::class_<Interval>(m, "Interval")
        .def_readonly("lo", &Interval::lo)
        .def_readonly("hi", &Interval::hi);

    py::class_<BoundsReport>(m, "BoundsReport")
        .def_readonly("negative", &BoundsReport::negative)
        .def_readonly("positive", &BoundsReport::positive);

    py::class_<ContainmentVerdict>(m, "ContainmentVerdict")
        .def_readonly("contained", &ContainmentVerdict::contained)
        .def_readonly("violations", &ContainmentVerdict::violations);

    py::class_<NetworkAnalysis>(m, "NetworkAnalysis")
        .def_readonly("network_id", &NetworkAnalysis::network_id)
        .def_readonly("p", &NetworkAnalysis::p)
        .def_readonly("summary", &NetworkAnalysis::summary)
        .def_readonly("a3", &NetworkAnalysis::a3)
        .def_readonly("a2", &NetworkAnalysis::a2)
        .def_readonly("a1", &NetworkAnalysis::a1)
        .def_readonly("bounds3", &NetworkAnalysis::bounds3)
        .def_readonly("bounds2", &NetworkAnalysis::bounds2)
        .def_readonly("bounds1", &NetworkAnalysis::bounds1)
        .def_readonly("verdict3", &NetworkAnalysis::verdict3)
        .def_readonly("verdict2", &NetworkAnalysis::verdict2)
        .def_readonly("verdict1", &NetworkAnalysis::verdict1);
    m.def("analyze_network", &analyze_network, py::arg("cfg"), py::arg("twin"));

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("tol", &SolverConfig::tol)
        .def_readwrite("max_iters", &SolverConfig::max_iters);

    py::class_<SolveLog>(m, "SolveLog")
        .def_readonly("iterations", &SolveLog::iterations)
        .def_readonly("relative_residuals", &SolveLog::relative_residuals)
        .def_readonly("converged", &SolveLog::converged);

    m.def(
        "solve",
        [](const ExperimentConfig& cfg, const TwinData& twin, Formulation form) {
            auto ops = make_operators(cfg, twin);
            const SystemInstance sys = make_system(ops, form, twin.b, twin.d);
            auto [x, log] = form == Formulation::A1 ? cg(sys.apply, sys.rhs, cfg.solver)
                                                    : minres(sys.apply, sys.rhs, cfg.solver);
            const Increment inc = recover_increment(*ops, form, x, twin.d);
            return py::make_tuple(inc.dx, log);
        },
        py::arg("cfg"), py::arg("twin"), py::arg("form"),
        "Solve one formulation; returns (increment, SolveLog).");

    m.def("reproduce_tables", &reproduce_tables, py::arg("cfg"), py::arg("out_dir"));
    m.def("reproduce_figures", &reproduce_figures, py::arg("cfg"), py::arg("out_dir"));
    m.def("verify", &verify, py::arg("cfg"), py::arg("out_dir"));
}
