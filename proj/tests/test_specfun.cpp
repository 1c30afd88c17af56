#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hermite.hpp>

#include <random>

#include "sasatk/errors.hpp"
#include "sasatk/specfun.hpp"

using namespace sasatk;
using namespace sasatk::specfun;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Complex integrate(const std::function<Complex(double)>& f, double lo, double hi) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double re = ts.integrate([&](double t) { return f(t).real(); }, lo, hi, 1e-13);
    const double im = ts.integrate([&](double t) { return f(t).imag(); }, lo, hi, 1e-13);
    return {re, im};
}

// D_a(z) = e^{-z^2/4} / Gamma(-a) int_0^inf t^{-a-1} e^{-zt - t^2/2} dt, Re a < 0,
// with Gamma(-a) from its own Euler integral.
Complex pcf_integral(Complex a, Complex z) {
    const Complex s = -a;
    const Complex g = integrate([&](double t) { return std::pow(t, s - 1.0) * std::exp(-t); }, 0.0, 60.0);
    const Complex i = integrate(
        [&](double t) { return std::pow(t, s - 1.0) * std::exp(-z * t - t * t / 2.0); }, 0.0, 40.0);
    return std::exp(-z * z / 4.0) * i / g;
}

}  // namespace

TEST_SUITE("specfun") {
    TEST_CASE("gamma matches real tgamma") {
        for (double x : {0.3, 0.5, 1.0, 2.5, 7.25, 15.5, -0.5, -2.7}) {
            CHECK(rel(gamma_complex(x), boost::math::tgamma(x)) < 1e-13);
        }
    }

    TEST_CASE("gamma modulus on vertical lines") {
        for (double y : {0.05, 0.3, 1.0, 2.0, 4.0}) {
            const double m2 = std::norm(gamma_complex(Complex(0.0, y)));
            CHECK(std::abs(m2 / (kPi / (y * std::sinh(kPi * y))) - 1.0) < 1e-13);
            const double h2 = std::norm(gamma_complex(Complex(0.5, y)));
            CHECK(std::abs(h2 / (kPi / std::cosh(kPi * y)) - 1.0) < 1e-13);
        }
    }

    TEST_CASE("gamma recurrence and reciprocal") {
        std::mt19937 gen(12345);
        std::uniform_real_distribution<double> u(-4.0, 4.0);
        for (int i = 0; i < 50; ++i) {
            const Complex z(u(gen), u(gen));
            CHECK(rel(gamma_complex(z + 1.0), z * gamma_complex(z)) < 1e-12);
            CHECK(std::abs(rgamma_complex(z) * gamma_complex(z) - 1.0) < 1e-12);
        }
        CHECK(std::abs(rgamma_complex(-3.0)) == 0.0);
    }

    TEST_CASE("gamma poles raise") {
        CHECK_THROWS_AS(gamma_complex(0.0), PoleError);
        CHECK_THROWS_AS(gamma_complex(-4.0), PoleError);
    }

    TEST_CASE("D_0 and D_1") {
        for (Complex z : {Complex(0.0), Complex(1.3, -0.4), Complex(-2.0, 1.0), Complex(9.0, 2.0)}) {
            CHECK(std::abs(pcf_d(0.0, z) - std::exp(-z * z / 4.0)) < 1e-13 * std::max(1.0, std::abs(std::exp(-z * z / 4.0))) + 1e-15);
            CHECK(std::abs(pcf_d(1.0, z) - z * std::exp(-z * z / 4.0)) < 1e-12 * std::max(1.0, std::abs(z * std::exp(-z * z / 4.0))) + 1e-15);
        }
    }

    TEST_CASE("integer order against Hermite polynomials") {
        for (unsigned n : {2u, 3u, 5u, 8u}) {
            for (double x : {-5.0, -1.5, 0.0, 0.7, 3.0, 7.5, 10.0}) {
                const double expect = std::pow(2.0, -0.5 * n) * std::exp(-x * x / 4.0) *
                                      boost::math::hermite(n, x / std::sqrt(2.0));
                const Complex got = pcf_d(static_cast<double>(n), x);
                CHECK(std::abs(got - expect) <= 1e-11 * std::max(std::abs(expect), 1e-3));
            }
        }
    }

    TEST_CASE("complex order against the integral representation") {
        const Complex as[] = {Complex(-0.7, -0.4), Complex(-1.5, 0.3), Complex(-0.2, -1.0)};
        const Complex zs[] = {Complex(0.5, 0.0), Complex(2.0, -1.0), Complex(-1.0, 1.5), Complex(0.0, 3.0),
                              Complex(6.0, 2.0), Complex(9.0, -3.0), Complex(3.0, 9.5)};
        for (Complex a : as) {
            for (Complex z : zs) {
                CAPTURE(a);
                CAPTURE(z);
                CHECK(rel(pcf_d(a, z), pcf_integral(a, z)) < 1e-9);
            }
        }
    }

    TEST_CASE("series and asymptotic branches agree at the crossover") {
        for (double arg : {-2.5, -1.6, -0.8, 0.0, 0.6, 1.2, 2.2}) {
            const Complex z = std::polar(kSeriesRadius, arg);
            for (Complex a : {Complex(0.0, -0.3), Complex(0.0, -1.0), Complex(0.5, 0.2)}) {
                const Complex s = pcf_d_series(a, z).value;
                const Complex as = pcf_d_asymptotic(a, z).value;
                CAPTURE(arg);
                CHECK(rel(as, s) < 1e-10);
            }
        }
    }

    TEST_CASE("series refuses when roundoff eats the budget") {
        CHECK_THROWS_AS(pcf_d_series(Complex(0.0, -0.5), Complex(40.0, 0.0)), AccuracyLossError);
    }

    TEST_CASE("budget invariant") {
        AccuracyBudget b{0.0, 0.0};
        CHECK_THROWS_AS(b.validate(), DomainError);
        CHECK_THROWS_AS(pcf_d(0.5, 1.0, b), DomainError);
    }

    TEST_CASE("recurrence and connection on a random sample") {
        std::mt19937 gen(20240607);
        std::uniform_real_distribution<double> nu(0.05, 2.0), r(0.0, 3.0), th(-kPi, kPi);
        double worst_rec = 0.0, worst_con = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Complex a(0.0, -nu(gen));
            const Complex z = std::polar(r(gen), th(gen));
            const auto res = pcf_identities_residual(a, z);
            worst_rec = std::max(worst_rec, res.recurrence);
            worst_con = std::max(worst_con, res.connection);
        }
        CHECK(worst_rec <= 1e-9);
        CHECK(worst_con <= 1e-9);
    }

    TEST_CASE("Weber equation residual") {
        for (Complex a : {Complex(0.0, -0.1), Complex(0.0, -1.0), Complex(0.3, -0.5)}) {
            for (Complex z : {Complex(0.5, -0.5), Complex(2.0, 1.0), Complex(-1.0, -2.0), Complex(4.0, 0.0)}) {
                CHECK(weber_residual(a, z, 1e-3) <= 1e-6);
            }
        }
    }
}
