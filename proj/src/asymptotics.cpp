#include "sasatk/asymptotics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "sasatk/errors.hpp"
#include "sasatk/model_rhp.hpp"
#include "sasatk/specfun.hpp"

namespace sasatk::asymptotics {

std::pair<double, double> stationary_points(double zeta) {
    if (!(zeta > 0.0) || !std::isfinite(zeta)) {
        throw DomainError(fmt::format("stationary_points: zeta = {} must be positive", zeta));
    }
    const double k0 = std::sqrt(zeta / 12.0);
    return {-k0, k0};
}

Complex phase(double zeta, Complex k) { return 2.0 * kI * zeta * k - 8.0 * kI * k * k * k; }

int signature_sample(double zeta, Complex k) {
    if (!(zeta > 0.0)) throw DomainError("signature_sample: zeta must be positive");
    const double re = phase(zeta, k).real();
    return (re > 0.0) - (re < 0.0);
}

AsymptoticContext AsymptoticContext::make(double zeta, double t, double nu, Complex chi_plus,
                                          Complex chi_minus, const Row2& rho_plus,
                                          const Row2& rho_minus, const ContextTolerances& tol) {
    AsymptoticContext c;
    c.zeta = zeta;
    c.t = t;
    c.k0 = stationary_points(zeta).second;
    c.nu = nu;
    c.chi_plus = chi_plus;
    c.chi_minus = chi_minus;
    c.rho_plus = rho_plus;
    c.rho_minus = rho_minus;
    c.validate(tol);
    return c;
}

void AsymptoticContext::validate(const ContextTolerances& tol) const {
    if (!(zeta > 0.0 && zeta <= tol.M)) {
        throw DomainError(fmt::format("zeta = {} outside (0, {}]", zeta, tol.M));
    }
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive");
    if (k0 != std::sqrt(zeta / 12.0)) {
        throw DomainError("k0 inconsistent with zeta");
    }
    if (std::abs(nu - scattering::nu_of(rho_plus)) > tol.tol) {
        throw DomainError(fmt::format("nu = {} inconsistent with rho(k0) (expected {})", nu,
                                      scattering::nu_of(rho_plus)));
    }
    if (std::abs(chi_plus.real()) > tol.tol || std::abs(chi_minus.real()) > tol.tol) {
        throw DomainError("Re chi(+-k0) is not zero");
    }
    if ((rho_minus - swap_conj(rho_plus)).norm() > tol.tol) {
        throw SymmetryError(fmt::format("rho(-k0) differs from swapped conj(rho(k0)) by {:.3e}",
                                        (rho_minus - swap_conj(rho_plus)).norm()));
    }
}

AsymptoticContext AsymptoticContext::at_time(double t_new) const {
    AsymptoticContext c = *this;
    c.t = t_new;
    if (!(t_new > 0.0)) throw DomainError("t must be positive");
    return c;
}

AsymptoticContext build_context(const scattering::InitialProfile& profile,
                                const ContextInputs& inputs, double zeta, double t) {
    const double k0 = stationary_points(zeta).second;
    const auto s_plus = scattering::scattering_matrix(profile, k0, inputs.ode_tol);
    const auto s_minus = scattering::scattering_matrix(profile, -k0, inputs.ode_tol);
    const Row2 rho_plus = scattering::reflection(s_plus);
    const Row2 rho_minus_direct = scattering::reflection(s_minus);
    const Row2 rho_minus = swap_conj(rho_plus);
    if ((rho_minus - rho_minus_direct).norm() > inputs.tol.tol) {
        throw SymmetryError(fmt::format(
            "rho(-k0) from symmetry and from direct scattering differ by {:.3e}",
            (rho_minus - rho_minus_direct).norm()));
    }
    const Complex chi_p = scattering::chi_of(inputs.table, k0, scattering::Endpoint::plus, inputs.chi);
    const Complex chi_m = scattering::chi_of(inputs.table, k0, scattering::Endpoint::minus, inputs.chi);
    return AsymptoticContext::make(zeta, t, scattering::nu_of(rho_plus), chi_p, chi_m, rho_plus,
                                   rho_minus, inputs.tol);
}

std::pair<Complex, Complex> eta_factors(const AsymptoticContext& ctx) {
    const double k3 = ctx.k0 * ctx.k0 * ctx.k0;
    const double log_p = std::log(192.0 * ctx.t * k3);
    const Complex eta = std::exp(kI * (ctx.nu / 2.0 * log_p + 8.0 * ctx.t * k3) + ctx.chi_plus);
    const Complex eta_hat = std::exp(-kI * (ctx.nu / 2.0 * log_p + 8.0 * ctx.t * k3) + ctx.chi_minus);
    return {eta, eta_hat};
}

std::pair<Row2, Row2> beta_factors(const AsymptoticContext& ctx) {
    model_rhp::ModelParameters p;
    p.nu = ctx.nu;
    p.rho0 = ctx.rho_plus;
    const Row2 bx = model_rhp::beta21_of(p);
    return {bx, swap_conj(bx)};
}

LeadingOrder u_leading(const AsymptoticContext& ctx, const Row2& rho_raw) {
    LeadingOrder out;
    out.error_scale = std::log(ctx.t) / ctx.t;
    const double nu = ctx.nu;
    const double k3 = ctx.k0 * ctx.k0 * ctx.k0;
    const double sqrt_t = std::sqrt(ctx.t);

    if (nu > 0.0) {
        const double log_p = std::log(192.0 * ctx.t * k3);
        const double theta = 16.0 * ctx.t * k3;
        const Complex plus = std::exp(kI * (nu * log_p + theta + kPi / 4.0) + 2.0 * ctx.chi_plus) *
                             specfun::gamma_complex(Complex(0.0, -nu)) * rho_raw(1);
        const Complex minus = std::exp(-kI * (nu * log_p + theta + kPi / 4.0) + 2.0 * ctx.chi_minus) *
                              specfun::gamma_complex(Complex(0.0, nu)) * std::conj(rho_raw(0));
        out.u_as = nu * std::exp(-kPi * nu / 2.0) / std::sqrt(24.0 * kPi * ctx.k0) * (plus + minus);
    } else {
        out.u_as = 0.0;
    }
    out.u_as_over_sqrt_t = out.u_as / sqrt_t;

    const auto [eta, eta_hat] = eta_factors(ctx);
    const auto [bx, by] = beta_factors(ctx);
    const Row2 v = (2.0 * kI / std::sqrt(48.0 * ctx.t * ctx.k0)) *
                   (-kI * eta * eta * bx - kI * eta_hat * eta_hat * by);
    out.vector_first = v(0);
    out.vector_second = v(1);

    const double scale = std::max({std::abs(out.u_as_over_sqrt_t), std::abs(v(1)), 1e-300});
    const bool all_zero = out.u_as == 0.0 && v(0) == 0.0 && v(1) == 0.0;
    out.route_mismatch = all_zero ? 0.0 : std::abs(out.u_as_over_sqrt_t - v(1)) / scale;
    out.conj_mismatch = all_zero ? 0.0 : std::abs(v(0) - std::conj(v(1))) / scale;
    if (out.route_mismatch > kRouteTol) {
        throw RouteMismatchError(fmt::format(
            "closed-form and vector evaluations of u_as differ by {:.3e} (relative)", out.route_mismatch));
    }
    const double conj_allow = kRouteTol + 2.0 * std::abs(ctx.chi_plus + ctx.chi_minus);
    if (out.conj_mismatch > conj_allow) {
        throw RouteMismatchError(fmt::format(
            "vector components are not conjugate: relative mismatch {:.3e}", out.conj_mismatch));
    }
    return out;
}

}  // namespace sasatk::asymptotics
