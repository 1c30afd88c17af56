#pragma once

// Complex Gamma and parabolic-cylinder functions.
//
// D_a(z) is evaluated by the Maclaurin expansion in the even/odd Weber
// solutions for |z| <= kSeriesRadius (summed in binary128 so that the
// cancellation on the recessive rays |arg z| < pi/4 stays below the budget)
// and by the large-|z| expansions otherwise:
//
//   |arg z| <= pi/2 :  D_a(z) ~ z^a e^{-z^2/4} sum_s (-1)^s (-a)_{2s} / (s! (2z^2)^s)
//   pi/2 < ±arg z   :  the above  - sqrt(2 pi)/Gamma(-a) e^{±i pi a} e^{z^2/4} z^{-a-1}
//                                   * sum_s (a+1)_{2s} / (s! (2z^2)^s)
//
// The switch between the one- and two-term forms sits on the Stokes rays
// arg z = ±pi/2, where the second exponential is smallest relative to the
// first; the ray itself belongs to the one-term form. All powers use the
// principal branch of log.

#include <utility>

#include "sasatk/types.hpp"

namespace sasatk::specfun {

struct AccuracyBudget {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;

    // Throws DomainError unless the invariant abs_tol > 0 or rel_tol > 0 holds.
    void validate() const;
    double allowed(double scale) const { return abs_tol + rel_tol * scale; }
};

inline constexpr double kSeriesRadius = 8.0;

// Gamma(z). Lanczos approximation for Re z >= 1/2, reflection otherwise.
Complex gamma_complex(Complex z);

// 1/Gamma(z); entire, exactly zero at the non-positive integers.
Complex rgamma_complex(Complex z);

struct PcfValue {
    Complex value;
    Complex derivative;  // d/dz D_a(z)
};

Complex pcf_d(Complex a, Complex z, const AccuracyBudget& budget = {});
PcfValue pcf_d_with_derivative(Complex a, Complex z, const AccuracyBudget& budget = {});

// Branch-forcing entry points, used to verify agreement on the crossover.
PcfValue pcf_d_series(Complex a, Complex z, const AccuracyBudget& budget = {});
PcfValue pcf_d_asymptotic(Complex a, Complex z, const AccuracyBudget& budget = {});

// |g'' + (1/2 - z^2/4 + a) g| / max(1, |g|) with g = D_a and g'' from a central second difference.
double weber_residual(Complex a, Complex z, double h, const AccuracyBudget& budget = {});

struct IdentityResiduals {
    double recurrence;  // |D_a' + z/2 D_a - a D_{a-1}|
    double connection;  // |D_{a-1}(z) - Gamma(a)/sqrt(2pi) (e^{i pi (a-1)/2} D_{-a}(iz) + e^{-i pi (a-1)/2} D_{-a}(-iz))|
};

IdentityResiduals pcf_identities_residual(Complex a, Complex z, const AccuracyBudget& budget = {});

}  // namespace sasatk::specfun
