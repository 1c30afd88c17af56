#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cstdio>
#include <filesystem>

#include "sasatk/errors.hpp"
#include "sasatk/scattering.hpp"

using namespace sasatk;
using namespace sasatk::scattering;

namespace {

// Real u = a sech x reduces to Zakharov-Shabat with q = sqrt(2) a sech x, where
// |b| = |sin(pi A)| / cosh(pi k), A = sqrt(2) a, and |a|^2 + |b|^2 = 1, so
// 1 + |rho|^2 = 1 / (1 - |b|^2).
double sech_g(double a, double k) {
    const double A = std::sqrt(2.0) * a;
    const double b = std::sin(kPi * A) / std::cosh(kPi * k);
    return 1.0 / (1.0 - b * b);
}

InitialProfile sech_profile(double a) {
    return InitialProfile::sample([a](double x) { return Complex(a / std::cosh(x), 0.0); }, -40.0, 40.0, 8001);
}

// chi(k0) from the closed-form g: (1/2 pi i) int ln(g/g(k0)) / (xi - k0)
double sech_chi_imag(double a, double k0) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double g0 = sech_g(a, k0);
    const double I = ts.integrate(
        [&](double xi) {
            const double d = xi - k0;
            if (std::abs(d) < 1e-12) return 0.0;
            return std::log(sech_g(a, xi) / g0) / d;
        },
        -k0, k0, 1e-14);
    return -I / (2.0 * kPi);
}

}  // namespace

TEST_SUITE("scattering") {
    TEST_CASE("zero potential gives the identity") {
        const auto p = InitialProfile::gaussian(0.0, -12, 12, 241);
        for (double k : {-2.0, 0.0, 0.3}) {
            const auto s = scattering_matrix(p, k, 1e-10);
            CHECK((s.s - Mat3::Identity()).norm() == 0.0);
            CHECK(reflection(s).norm() == 0.0);
        }
    }

    TEST_CASE("Born regime") {
        const double eps = 1e-3;
        const auto p = InitialProfile::gaussian(eps, -12, 12, 2401);
        double worst = 0.0;
        for (int i = 0; i <= 80; ++i) {
            const double k = -2.0 + 4.0 * i / 80.0;
            Complex ft = 0.0;
            for (std::size_t j = 0; j < p.n(); ++j) ft += std::conj(p.u0[j]) * std::polar(1.0, -2.0 * k * p.x(j));
            ft *= p.dx();
            const auto s = scattering_matrix(p, k, 1e-10);
            worst = std::max(worst, std::abs(s.s(2, 0) + ft));
        }
        CHECK(worst <= 5e-6);
    }

    TEST_CASE("sech potential against the closed-form reflection modulus") {
        const double a = 0.3;
        const auto p = sech_profile(a);
        for (double k : {-1.5, -0.6, 0.0, 0.2, 0.9}) {
            const auto s = scattering_matrix(p, k, 1e-11);
            const Row2 r = reflection(s);
            CAPTURE(k);
            CHECK(std::abs(1.0 + norm_sq(r) - sech_g(a, k)) < 1e-8);
            CHECK(std::abs(r(0) - r(1)) < 1e-10);
        }
    }

    TEST_CASE("symmetries for complex asymmetric data") {
        const auto p = InitialProfile::sample(
            [](double x) { return Complex(0.5, 0.3) * std::exp(-(x - 0.5) * (x - 0.5)) * std::polar(1.0, x); }, -12,
            12, 2401);
        const auto res = scatter_grid(p, -2.0, 2.0, 41);
        CHECK(res.report.max_det <= 1e-8);
        CHECK(res.report.max_unitarity <= 1e-8);
        CHECK(res.report.max_conjugation <= 1e-8);
        CHECK(res.report.max_rho_symmetry <= 1e-8);
    }

    TEST_CASE("grid nodes are mirrored exactly") {
        const auto p = InitialProfile::gaussian(0.2, -12, 12, 1201);
        const auto res = scatter_grid(p, -1.3, 1.3, 27);
        const auto& k = res.table.k_nodes;
        for (std::size_t i = 0; i < k.size(); ++i) CHECK(k[i] == -k[k.size() - 1 - i]);
        const auto off = scatter_grid(p, -1.0, 2.0, 11);
        CHECK(std::isnan(off.report.max_conjugation));
    }

    TEST_CASE("decay precondition") {
        const auto bad = InitialProfile::gaussian(1.0, -2.0, 2.0, 101);
        CHECK_THROWS_AS(bad.validate(), DecayViolationError);
        CHECK_THROWS_AS(scattering_matrix(bad, 0.0, 1e-10), DecayViolationError);
    }

    TEST_CASE("s33 guard") {
        const auto p = InitialProfile::gaussian(0.7, -12, 12, 2401);
        const auto s = scattering_matrix(p, 0.0, 1e-10);
        CHECK_THROWS_AS(reflection(s, 2.0), NearZeroS33Error);
    }

    TEST_CASE("lower-half-plane zeros of s33 for sech data") {
        // Zakharov-Shabat sech: floor(A + 1/2) bound states
        CHECK(lower_zero_count(sech_profile(0.3), 20.0, 2001) == 0);
        CHECK(lower_zero_count(sech_profile(0.5), 20.0, 2001) == 1);
        CHECK(lower_zero_count(sech_profile(1.2), 20.0, 2001) == 2);
    }

    TEST_CASE("table csv round trip") {
        const auto p = InitialProfile::gaussian(0.4, -12, 12, 1201);
        const auto res = scatter_grid(p, -1.0, 1.0, 21);
        const auto path = (std::filesystem::temp_directory_path() / "sasatk_table_test.csv").string();
        res.table.write_csv(path);
        const auto back = ReflectionTable::read_csv(path);
        std::remove(path.c_str());
        REQUIRE(back.size() == res.table.size());
        for (std::size_t i = 0; i < back.size(); ++i) {
            CHECK(back.k_nodes[i] == res.table.k_nodes[i]);
            CHECK(back.rho[i] == res.table.rho[i]);
        }
    }

    TEST_CASE("profile csv round trip and resample") {
        const auto p = InitialProfile::gaussian(Complex(0.3, -0.1), -12, 12, 481);
        const auto path = (std::filesystem::temp_directory_path() / "sasatk_profile_test.csv").string();
        p.write_csv(path);
        const auto back = InitialProfile::read_csv(path);
        std::remove(path.c_str());
        CHECK(back.u0 == p.u0);
        const auto r = p.resample({-20.0, 0.0, 0.013, 30.0});
        CHECK(std::abs(r[0]) == 0.0);
        CHECK(std::abs(r[1] - Complex(0.3, -0.1)) < 1e-12);
        CHECK(std::abs(r[2] - Complex(0.3, -0.1) * std::exp(-0.013 * 0.013)) < 1e-6);
        CHECK(std::abs(r[3]) == 0.0);
    }

    TEST_CASE("chi against a closed-form g") {
        const double a = 0.3;
        const double k0 = std::sqrt(1.0 / 12.0);
        const auto res = scatter_default(sech_profile(a), k0);
        const Complex cp = chi_of(res.table, k0, Endpoint::plus);
        const Complex cm = chi_of(res.table, k0, Endpoint::minus);
        const double oracle = sech_chi_imag(a, k0);
        CHECK(std::abs(cp.real()) <= 1e-9);
        CHECK(std::abs(cm.real()) <= 1e-9);
        CHECK(std::abs(cp.imag() - oracle) < 1e-7);
        CHECK(std::abs(cm.imag() + oracle) < 1e-7);
    }

    TEST_CASE("chi needs a resolved table") {
        const auto p = InitialProfile::gaussian(0.5, -12, 12, 1201);
        const double k0 = 0.3;
        const auto coarse = scatter_grid(p, -1.0, 1.0, 9);
        CHECK_THROWS_AS(chi_of(coarse.table, k0, Endpoint::plus), ResolutionError);
        const auto narrow = scatter_grid(p, -0.2, 0.2, 101);
        CHECK_THROWS_AS(chi_of(narrow.table, k0, Endpoint::plus), ResolutionError);
    }

    TEST_CASE("det delta jump across (-k0, k0)") {
        const double a = 0.3;
        const double k0 = std::sqrt(1.0 / 12.0);
        const auto res = scatter_default(sech_profile(a), k0);
        for (double x : {-0.2, 0.0, 0.15}) {
            auto ratio = [&](double e) {
                return det_delta(res.table, k0, Complex(x, e)) / det_delta(res.table, k0, Complex(x, -e));
            };
            const double e = 1e-5;
            const Complex rich = 2.0 * ratio(e / 2.0) - ratio(e);
            CAPTURE(x);
            CHECK(std::abs(rich / sech_g(a, x) - 1.0) < 1e-6);
        }
        // outside the interval there is no jump
        const Complex r = det_delta(res.table, k0, Complex(0.6, 1e-5)) / det_delta(res.table, k0, Complex(0.6, -1e-5));
        CHECK(std::abs(r - 1.0) < 1e-4);
    }

    TEST_CASE("jump matrix") {
        Row2 rho;
        rho << Complex(0.3, 0.1), Complex(-0.2, 0.4);
        const Mat3 J = build_jump(rho, 2.0, 4.0, 0.37, 0.5);
        CHECK((J - J.adjoint()).norm() == 0.0);
        CHECK(std::abs(J.determinant() - 1.0) < 1e-14);
        CHECK_THROWS_AS(build_jump(rho, 2.0, 4.0, 0.37, 0.6), DomainError);
    }
}
