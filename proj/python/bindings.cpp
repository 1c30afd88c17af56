#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sasatk/asymptotics.hpp"
#include "sasatk/config.hpp"
#include "sasatk/errors.hpp"
#include "sasatk/model_rhp.hpp"
#include "sasatk/pde.hpp"
#include "sasatk/scattering.hpp"
#include "sasatk/specfun.hpp"

namespace py = pybind11;
using namespace sasatk;

PYBIND11_MODULE(_sasatk, m) {
    m.doc() = "Scattering, long-time asymptotics and a PDE oracle for the Sasa-Satsuma equation";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<DecayViolationError>(m, "DecayViolationError", base.ptr());
    py::register_exception<NearZeroS33Error>(m, "NearZeroS33Error", base.ptr());
    py::register_exception<AccuracyLossError>(m, "AccuracyLossError", base.ptr());
    py::register_exception<PoleError>(m, "PoleError", base.ptr());
    py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());
    py::register_exception<RouteMismatchError>(m, "RouteMismatchError", base.ptr());
    py::register_exception<MassDriftError>(m, "MassDriftError", base.ptr());
    py::register_exception<ContaminationError>(m, "ContaminationError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    // specfun
    py::class_<specfun::AccuracyBudget>(m, "AccuracyBudget")
        .def(py::init<>())
        .def(py::init([](double a, double r) { return specfun::AccuracyBudget{a, r}; }), py::arg("abs_tol"),
             py::arg("rel_tol"))
        .def_readwrite("abs_tol", &specfun::AccuracyBudget::abs_tol)
        .def_readwrite("rel_tol", &specfun::AccuracyBudget::rel_tol);
    m.def("gamma", &specfun::gamma_complex, py::arg("z"));
    m.def("rgamma", &specfun::rgamma_complex, py::arg("z"));
    m.def("pcf_d", &specfun::pcf_d, py::arg("a"), py::arg("z"), py::arg("budget") = specfun::AccuracyBudget{});
    m.def("weber_residual", &specfun::weber_residual, py::arg("a"), py::arg("z"), py::arg("h"),
          py::arg("budget") = specfun::AccuracyBudget{});

    // scattering
    py::class_<scattering::InitialProfile>(m, "InitialProfile")
        .def(py::init([](double x_min, double x_max, std::vector<Complex> u0, double decay_tol) {
                 scattering::InitialProfile p{x_min, x_max, std::move(u0), decay_tol};
                 p.validate();
                 return p;
             }),
             py::arg("x_min"), py::arg("x_max"), py::arg("u0"), py::arg("decay_tol") = 1e-12)
        .def_static("gaussian", &scattering::InitialProfile::gaussian, py::arg("amplitude"), py::arg("x_min") = -12.0,
                    py::arg("x_max") = 12.0, py::arg("n") = 2401, py::arg("decay_tol") = 1e-12)
        .def_static("read_csv", &scattering::InitialProfile::read_csv, py::arg("path"), py::arg("decay_tol") = 1e-12)
        .def("write_csv", &scattering::InitialProfile::write_csv)
        .def_readonly("x_min", &scattering::InitialProfile::x_min)
        .def_readonly("x_max", &scattering::InitialProfile::x_max)
        .def_readonly("u0", &scattering::InitialProfile::u0);

    py::class_<scattering::ScatteringMatrix>(m, "ScatteringMatrix")
        .def_readonly("k", &scattering::ScatteringMatrix::k)
        .def_readonly("s", &scattering::ScatteringMatrix::s)
        .def("det_residual", &scattering::ScatteringMatrix::det_residual)
        .def("unitarity_residual", &scattering::ScatteringMatrix::unitarity_residual);
    m.def("scattering_matrix", &scattering::scattering_matrix, py::arg("profile"), py::arg("k"),
          py::arg("tol") = 1e-10);
    m.def("conjugation_residual", &scattering::conjugation_residual);
    m.def("reflection", &scattering::reflection, py::arg("s"), py::arg("zero_threshold") = scattering::kS33ZeroThreshold);
    m.def("nu_of", &scattering::nu_of);
    m.def("lower_zero_count", &scattering::lower_zero_count, py::arg("profile"), py::arg("k_max") = 20.0,
          py::arg("count") = 4001, py::arg("tol") = 1e-10);

    py::class_<scattering::ReflectionTable>(m, "ReflectionTable")
        .def_readonly("k_nodes", &scattering::ReflectionTable::k_nodes)
        .def_readonly("rho", &scattering::ReflectionTable::rho)
        .def_readonly("rho_norm_sq", &scattering::ReflectionTable::rho_norm_sq)
        .def("symmetry_residual", &scattering::ReflectionTable::symmetry_residual)
        .def_static("read_csv", &scattering::ReflectionTable::read_csv)
        .def("write_csv", &scattering::ReflectionTable::write_csv);

    py::class_<scattering::SymmetryReport>(m, "SymmetryReport")
        .def_readonly("max_det", &scattering::SymmetryReport::max_det)
        .def_readonly("max_unitarity", &scattering::SymmetryReport::max_unitarity)
        .def_readonly("max_conjugation", &scattering::SymmetryReport::max_conjugation)
        .def_readonly("max_rho_symmetry", &scattering::SymmetryReport::max_rho_symmetry);
    py::class_<scattering::ScatterResult>(m, "ScatterResult")
        .def_readonly("table", &scattering::ScatterResult::table)
        .def_readonly("matrices", &scattering::ScatterResult::matrices)
        .def_readonly("report", &scattering::ScatterResult::report);
    m.def(
        "scatter_grid",
        [](const scattering::InitialProfile& p, double lo, double hi, std::size_t count, double tol, unsigned threads) {
            scattering::TableOptions o;
            o.tol = tol;
            o.threads = threads;
            py::gil_scoped_release release;
            return scattering::scatter_grid(p, lo, hi, count, o);
        },
        py::arg("profile"), py::arg("k_lo"), py::arg("k_hi"), py::arg("count"), py::arg("tol") = 1e-10,
        py::arg("threads") = 0);
    m.def(
        "chi",
        [](const scattering::ReflectionTable& t, double k0, bool plus) {
            return scattering::chi_of(t, k0, plus ? scattering::Endpoint::plus : scattering::Endpoint::minus);
        },
        py::arg("table"), py::arg("k0"), py::arg("plus") = true);
    m.def(
        "det_delta", [](const scattering::ReflectionTable& t, double k0, Complex k) { return scattering::det_delta(t, k0, k); },
        py::arg("table"), py::arg("k0"), py::arg("k"));

    // asymptotics
    m.def("stationary_points", &asymptotics::stationary_points, py::arg("zeta"));
    m.def("phase", &asymptotics::phase, py::arg("zeta"), py::arg("k"));
    m.def("signature_sample", &asymptotics::signature_sample, py::arg("zeta"), py::arg("k"));
    py::class_<asymptotics::AsymptoticContext>(m, "AsymptoticContext")
        .def_readonly("zeta", &asymptotics::AsymptoticContext::zeta)
        .def_readonly("t", &asymptotics::AsymptoticContext::t)
        .def_readonly("k0", &asymptotics::AsymptoticContext::k0)
        .def_readonly("nu", &asymptotics::AsymptoticContext::nu)
        .def_readonly("chi_plus", &asymptotics::AsymptoticContext::chi_plus)
        .def_readonly("chi_minus", &asymptotics::AsymptoticContext::chi_minus)
        .def_readonly("rho_plus", &asymptotics::AsymptoticContext::rho_plus)
        .def("at_time", &asymptotics::AsymptoticContext::at_time);
    m.def(
        "build_context",
        [](const scattering::InitialProfile& p, const scattering::ReflectionTable& t, double zeta, double time) {
            asymptotics::ContextInputs in;
            in.table = t;
            return asymptotics::build_context(p, in, zeta, time);
        },
        py::arg("profile"), py::arg("table"), py::arg("zeta"), py::arg("t"));
    m.def(
        "u_leading",
        [](const asymptotics::AsymptoticContext& ctx) {
            const auto lo = asymptotics::u_leading(ctx, ctx.rho_plus);
            return py::dict(py::arg("u_as") = lo.u_as, py::arg("u_as_over_sqrt_t") = lo.u_as_over_sqrt_t,
                            py::arg("route_mismatch") = lo.route_mismatch);
        },
        py::arg("ctx"));

    // model problem
    m.def(
        "jump_residual",
        [](double nu, const Row2& direction, double r) {
            return model_rhp::jump_residual_ray(model_rhp::ModelParameters::from_nu(nu, direction), r);
        },
        py::arg("nu"), py::arg("direction"), py::arg("r"));
    m.def(
        "beta21",
        [](double nu, const Row2& direction) {
            return model_rhp::beta21_of(model_rhp::ModelParameters::from_nu(nu, direction));
        },
        py::arg("nu"), py::arg("direction"));

    // PDE oracle
    py::class_<pde::SimGrid>(m, "SimGrid")
        .def(py::init([](double L, std::size_t n) {
                 pde::SimGrid g{L, n};
                 g.validate();
                 return g;
             }),
             py::arg("half_width"), py::arg("n_modes"))
        .def_readonly("half_width", &pde::SimGrid::half_width)
        .def_readonly("n_modes", &pde::SimGrid::n_modes)
        .def("dx", &pde::SimGrid::dx)
        .def("x", &pde::SimGrid::x);
    py::class_<pde::FieldState>(m, "FieldState")
        .def(py::init([](double t, std::vector<Complex> u) { return pde::FieldState{t, std::move(u)}; }),
             py::arg("t"), py::arg("u"))
        .def_readonly("t", &pde::FieldState::t)
        .def_readonly("u", &pde::FieldState::u);
    m.def("mass", &pde::mass, py::arg("u"), py::arg("grid"));
    m.def("nonlinear_term", py::overload_cast<const std::vector<Complex>&, const pde::SimGrid&>(&pde::nonlinear_term),
          py::arg("u"), py::arg("grid"));
    m.def("step", py::overload_cast<const pde::FieldState&, double, const pde::SimGrid&>(&pde::step),
          py::arg("state"), py::arg("dt"), py::arg("grid"));
    m.def("linear_evolution", &pde::linear_evolution, py::arg("u0"), py::arg("grid"), py::arg("t"));
    m.def(
        "simulate",
        [](const scattering::InitialProfile& p, const pde::SimGrid& g, double dt, double t_end,
           const std::vector<double>& times, double contamination_tol) {
            pde::SimOptions o;
            o.contamination_tol = contamination_tol;
            py::gil_scoped_release release;
            return pde::simulate(p, g, dt, t_end, times, o);
        },
        py::arg("profile"), py::arg("grid"), py::arg("dt"), py::arg("t_end"), py::arg("snapshot_times"),
        py::arg("contamination_tol") = 1e-8);
    m.def("interpolate", &pde::interpolate, py::arg("state"), py::arg("grid"), py::arg("x"));

    m.def(
        "load_config",
        [](const std::string& path) {
            const auto c = config::load(path);
            return py::dict(py::arg("profile") = c.profile_path, py::arg("amplitude_scale") = c.amplitude_scale,
                            py::arg("zeta") = c.zeta, py::arg("t_list") = c.t_list, py::arg("k_count") = c.k_count);
        },
        py::arg("path"));
}
