#include <doctest.h>

#include "sasatk/errors.hpp"
#include "sasatk/pde.hpp"

using namespace sasatk;
using namespace sasatk::pde;

namespace {

double sup_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double sup(const std::vector<Complex>& a) {
    double m = 0.0;
    for (const auto& z : a) m = std::max(m, std::abs(z));
    return m;
}

std::vector<Complex> on_grid(const SimGrid& g, const std::function<Complex(double)>& f) {
    std::vector<Complex> u(g.n_modes);
    for (std::size_t j = 0; j < g.n_modes; ++j) u[j] = f(g.x(j));
    return u;
}

FieldState gaussian_state(const SimGrid& g, Complex amp) {
    return {0.0, on_grid(g, [amp](double x) { return amp * std::exp(-x * x); })};
}

}  // namespace

TEST_SUITE("pde") {
    TEST_CASE("grid invariants") {
        CHECK_THROWS_AS((SimGrid{10.0, 32}).validate(), DomainError);
        CHECK_THROWS_AS((SimGrid{10.0, 100}).validate(), DomainError);
        CHECK_THROWS_AS((SimGrid{0.0, 64}).validate(), DomainError);
        const SimGrid g{8.0, 64};
        CHECK_NOTHROW(g.validate());
        CHECK(g.dx() == 0.25);
        CHECK(g.x(0) == -8.0);
        const auto k = g.wavenumbers();
        CHECK(k[1] == doctest::Approx(kPi / 8.0));
        CHECK(k[63] == doctest::Approx(-kPi / 8.0));
    }

    TEST_CASE("nonlinear term, trivial fields") {
        const SimGrid g{kPi * 8.0, 128};
        CHECK(sup(nonlinear_term(std::vector<Complex>(128, 0.0), g)) == 0.0);
        CHECK(sup(nonlinear_term(std::vector<Complex>(128, Complex(0.4, -0.3)), g)) < 1e-14);
        const double kappa = 5.0 * kPi / g.half_width;
        const auto u = on_grid(g, [kappa](double x) { return std::polar(1.0, kappa * x); });
        const auto n = nonlinear_term(u, g);
        double err = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) err = std::max(err, std::abs(n[j] - 6.0 * kI * kappa * u[j]));
        CHECK(err < 1e-12);
    }

    TEST_CASE("nonlinear term against the analytic derivative") {
        const SimGrid g{20.0, 512};
        const Complex c(1.0, 0.5);
        const auto u = on_grid(g, [c](double x) { return c * std::exp(-x * x); });
        const auto n = nonlinear_term(u, g);
        double err = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double x = g.x(j);
            const Complex ux = -2.0 * x * u[j];
            const double m2 = std::norm(u[j]);
            const double m2x = -4.0 * x * m2;
            err = std::max(err, std::abs(n[j] - (6.0 * m2 * ux + 3.0 * u[j] * m2x)));
        }
        CHECK(err < 1e-10);
    }

    TEST_CASE("zero state stays zero") {
        const SimGrid g{32.0, 256};
        const auto s = step(FieldState{0.0, std::vector<Complex>(256, 0.0)}, 0.01, g);
        CHECK(sup(s.u) == 0.0);
        CHECK(s.t == 0.01);
    }

    TEST_CASE("one step in the linear regime") {
        const SimGrid g{120.0, 4096};
        const auto s0 = gaussian_state(g, 1e-4);
        const double dt = 5e-4;
        const auto s1 = step(s0, dt, g);
        const auto exact = linear_evolution(s0.u, g, dt);
        CHECK(sup_diff(s1.u, exact) <= 1e-10 * sup(exact));
    }

    TEST_CASE("linear limit at t = 1") {
        const SimGrid g{120.0, 4096};
        const auto s0 = gaussian_state(g, 1e-4);
        FieldState s = s0;
        Solver solver(g);
        solver.advance(s, 5e-4, 2000);
        CHECK(sup_diff(s.u, linear_evolution(s0.u, g, 1.0)) <= 1e-6);
    }

    TEST_CASE("linear limit converges as amplitude squared") {
        const SimGrid g{64.0, 1024};
        Solver solver(g);
        std::vector<double> rel;
        for (double a : {0.1, 0.05}) {
            const auto s0 = gaussian_state(g, a);
            FieldState s = s0;
            solver.advance(s, 2e-3, 500);
            const auto lin = linear_evolution(s0.u, g, 1.0);
            rel.push_back(sup_diff(s.u, lin) / sup(lin));
        }
        CHECK(rel[0] / rel[1] == doctest::Approx(4.0).epsilon(0.1));
    }

    TEST_CASE("mass conservation") {
        const SimGrid g{64.0, 2048};
        const auto s0 = gaussian_state(g, 0.7);
        FieldState s = s0;
        Solver solver(g);
        const double m0 = mass(s0.u, g);
        for (int i = 0; i < 10; ++i) {
            solver.advance(s, 5e-4, 2000);
            CHECK(std::abs(mass(s.u, g) - m0) <= 1e-10 * m0 * s.t);
        }
    }

    TEST_CASE("fourth-order time stepping") {
        const SimGrid g{40.0, 1024};
        const auto s0 = gaussian_state(g, Complex(0.6, 0.2));
        Solver solver(g);
        auto run = [&](double dt) {
            FieldState s = s0;
            solver.advance(s, dt, static_cast<std::size_t>(std::llround(0.5 / dt)));
            return s.u;
        };
        const auto a = run(0.004), b = run(0.002), c = run(0.001), d = run(0.0005);
        const double e1 = sup_diff(a, b), e2 = sup_diff(b, c), e3 = sup_diff(c, d);
        CHECK(std::log2(e1 / e2) >= 3.5);
        CHECK(std::log2(e2 / e3) >= 3.5);
    }

    TEST_CASE("spectral convergence in space") {
        const double L = 40.0, dt = 1e-3, t = 0.5;
        auto run = [&](std::size_t n) {
            const SimGrid g{L, n};
            FieldState s = gaussian_state(g, 0.7);
            Solver solver(g);
            solver.advance(s, dt, static_cast<std::size_t>(std::llround(t / dt)));
            return std::make_pair(g, s);
        };
        const auto [gr, ref] = run(2048);
        std::vector<double> err;
        for (std::size_t n : {128u, 256u}) {
            const auto [g, s] = run(n);
            double e = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                e = std::max(e, std::abs(s.u[j] - ref.u[j * (2048 / n)]));
            }
            err.push_back(e);
        }
        CHECK(err[0] > 10.0 * err[1]);
    }

    TEST_CASE("interpolation reproduces band-limited data") {
        const SimGrid g{kPi * 4.0, 64};
        const double k1 = 3.0 / 4.0, k2 = -5.0 / 4.0;
        auto f = [&](double x) { return std::polar(0.7, k1 * x) + Complex(0.2, 0.1) * std::polar(1.0, k2 * x); };
        const FieldState s{0.0, on_grid(g, f)};
        for (double x : {-3.3, 0.0, 0.123, 7.7}) CHECK(std::abs(interpolate(s, g, x) - f(x)) < 1e-13);
    }

    TEST_CASE("simulate lands on snapshot times") {
        const SimGrid g{64.0, 512};
        const auto p = scattering::InitialProfile::gaussian(0.0, -12, 12, 241);
        const auto snaps = simulate(p, g, 0.03, 1.0, {0.1, 0.5, 1.0});
        REQUIRE(snaps.size() == 3);
        CHECK(snaps[0].t == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(snaps[2].t == 1.0);
        for (const auto& s : snaps) CHECK(sup(s.u) == 0.0);
        CHECK_THROWS_AS(simulate(p, g, 0.01, 1.0, {0.5, 0.2}), DomainError);
        CHECK_THROWS_AS(simulate(p, g, 0.01, 1.0, {2.0}), DomainError);
    }

    TEST_CASE("profile must fit the box") {
        const auto p = scattering::InitialProfile::gaussian(0.3, -12, 12, 241);
        CHECK_THROWS_AS(sample_initial(p, SimGrid{10.0, 256}), DomainError);
    }

    TEST_CASE("guards fire") {
        const auto p = scattering::InitialProfile::gaussian(0.7, -12, 12, 2401);
        const SimGrid small{16.0, 256};
        SimOptions loose;
        loose.mass_rate_tol = 1e-3;
        CHECK_THROWS_AS(simulate(p, small, 0.005, 5.0, {5.0}, loose), ContaminationError);
        SimOptions strict;
        strict.mass_rate_tol = 1e-20;
        strict.check_contamination = false;
        CHECK_THROWS_AS(simulate(p, SimGrid{64.0, 1024}, 0.01, 0.5, {0.5}, strict), MassDriftError);
        Solver solver(SimGrid{32.0, 512});
        FieldState s = gaussian_state(SimGrid{32.0, 512}, 4.0);
        CHECK_THROWS_AS(solver.advance(s, 0.5, 200), BlowUpError);
    }

    TEST_CASE("comparison contract") {
        const SimGrid g{128.0, 1024};
        const auto p = scattering::InitialProfile::gaussian(0.0, -12, 12, 241);
        const auto snaps = simulate(p, g, 0.05, 8.0, {2.0, 4.0, 8.0});
        auto zero_ctx = [](double zeta, double t) {
            return asymptotics::AsymptoticContext::make(zeta, t, 0.0, 0.0, 0.0, Row2::Zero(), Row2::Zero());
        };
        const auto cmp = compare_asymptotic(snaps, g, zero_ctx, {1.0, 2.0});
        CHECK(cmp.rows.size() == 6);
        for (const auto& r : cmp.rows) CHECK(r.abs_err == 0.0);
        for (const auto& f : cmp.fits) CHECK_FALSE(f.exponent.has_value());
        CHECK_THROWS_AS(compare_asymptotic({snaps[0], snaps[1]}, g, zero_ctx, {1.0}), DomainError);
        CHECK_THROWS_AS(compare_asymptotic(snaps, g, zero_ctx, {11.0}), DomainError);
        CHECK_THROWS_AS(compare_asymptotic(snaps, g, zero_ctx, {20.0}, 30.0), DomainError);
    }
}

TEST_SUITE("e2e") {
    TEST_CASE("solitonless data follows the leading term") {
        const double amp = 0.5, zeta = 1.0;
        const auto p = scattering::InitialProfile::gaussian(amp, -12, 12, 2401);
        REQUIRE(scattering::lower_zero_count(p) == 0);
        const SimGrid g{4096.0, 32768};
        SimOptions opts;
        opts.contamination_tol = 1e-3;
        opts.mass_rate_tol = 1e-6;
        const auto snaps = simulate(p, g, 0.01, 80.0, {20.0, 40.0, 80.0}, opts);
        asymptotics::ContextInputs in;
        in.table = scattering::scatter_default(p, std::sqrt(zeta / 12.0)).table;
        auto builder = [&](double z, double t) { return asymptotics::build_context(p, in, z, t); };
        const auto cmp = compare_asymptotic(snaps, g, builder, {zeta});
        const auto& r = cmp.rows;
        MESSAGE("e(t) = " << r[0].abs_err << ", " << r[1].abs_err << ", " << r[2].abs_err
                          << "; exponent " << *cmp.fits[0].exponent);
        CHECK(r[0].abs_err > r[1].abs_err);
        CHECK(r[1].abs_err > r[2].abs_err);
        CHECK(r[2].abs_err / std::abs(r[2].u_as_over_sqrt_t) <= 0.3);
        // at least as fast as ln t / t
        REQUIRE(cmp.fits[0].exponent.has_value());
        CHECK(*cmp.fits[0].exponent <= -0.75);
    }
}
