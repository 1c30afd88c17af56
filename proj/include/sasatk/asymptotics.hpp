#pragma once

#include <utility>

#include "sasatk/scattering.hpp"
#include "sasatk/types.hpp"

namespace sasatk::asymptotics {

inline constexpr double kDefaultM = 10.0;

// (-k0, k0), k0 = sqrt(zeta/12)
std::pair<double, double> stationary_points(double zeta);

// 2 i zeta k - 8 i k^3
Complex phase(double zeta, Complex k);

// sign of Re phase(zeta, k)
int signature_sample(double zeta, Complex k);

struct ContextTolerances {
    double tol = 1e-8;
    double M = kDefaultM;
};

struct AsymptoticContext {
    double zeta = 0.0;
    double t = 0.0;
    double k0 = 0.0;
    double nu = 0.0;
    Complex chi_plus;
    Complex chi_minus;
    Row2 rho_plus = Row2::Zero();
    Row2 rho_minus = Row2::Zero();

    // Recomputes k0 from zeta, then checks the remaining invariants.
    static AsymptoticContext make(double zeta, double t, double nu, Complex chi_plus,
                                  Complex chi_minus, const Row2& rho_plus, const Row2& rho_minus,
                                  const ContextTolerances& tol = {});
    void validate(const ContextTolerances& tol = {}) const;
    AsymptoticContext at_time(double t_new) const;
};

struct ContextInputs {
    scattering::ReflectionTable table;
    double ode_tol = 1e-10;
    scattering::ChiOptions chi;
    ContextTolerances tol;
};

// rho(k0) from a direct scattering computation at k0, rho(-k0) from the
// symmetry and cross-checked against a computation at -k0, chi(+-k0) from the table.
AsymptoticContext build_context(const scattering::InitialProfile& profile,
                                const ContextInputs& inputs, double zeta, double t);

// eta = (192 t k0^3)^{i nu/2} e^{8 i t k0^3 + chi(k0)},
// eta_hat = (192 t k0^3)^{-i nu/2} e^{-8 i t k0^3 + chi(-k0)}
std::pair<Complex, Complex> eta_factors(const AsymptoticContext& ctx);

// beta^X = nu Gamma(-i nu) e^{i pi/4 - pi nu/2} rho(k0)/sqrt(2 pi), beta^Y = swap_conj(beta^X)
std::pair<Row2, Row2> beta_factors(const AsymptoticContext& ctx);

struct LeadingOrder {
    Complex u_as_over_sqrt_t;
    Complex u_as;
    double error_scale = 0.0;  // ln t / t
    // vector route: (conj u, u)/sqrt(t) assembled from eta and beta
    Complex vector_first;
    Complex vector_second;
    double route_mismatch = 0.0;  // relative
    double conj_mismatch = 0.0;   // relative
};

inline constexpr double kRouteTol = 1e-10;

// u_as from the closed form (returned) and from the vector assembly; throws
// RouteMismatchError if they differ by more than kRouteTol relative, or if
// the two vector components fail to be conjugate (the allowance grows with
// |chi(k0) + chi(-k0)|, which vanishes for exactly symmetric data).
LeadingOrder u_leading(const AsymptoticContext& ctx, const Row2& rho_raw);

}  // namespace sasatk::asymptotics
