#include "sasatk/model_rhp.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "sasatk/errors.hpp"

namespace sasatk::model_rhp {

using specfun::pcf_d;

double ModelParameters::consistency_residual() const {
    return std::abs(nu - std::log1p(norm_sq(rho0)) / (2.0 * kPi));
}

ModelParameters ModelParameters::from_nu(double nu, const Row2& direction) {
    if (!(nu >= 0.0)) throw DomainError("from_nu: nu must be >= 0");
    const double n = direction.norm();
    if (nu > 0.0 && n == 0.0) throw DomainError("from_nu: zero direction with nu > 0");
    ModelParameters p;
    p.nu = nu;
    p.rho0 = nu == 0.0 ? Row2::Zero().eval() : (direction * (std::sqrt(std::expm1(2.0 * kPi * nu)) / n)).eval();
    return p;
}

Row2 beta21_of(const ModelParameters& params) {
    if (!(params.nu >= 0.0) || !std::isfinite(params.nu)) throw DomainError("beta21: nu must be finite and >= 0");
    if (params.nu == 0.0) return Row2::Zero();
    const double nu = params.nu;
    const Complex c = specfun::gamma_complex(Complex(0.0, -nu)) / std::sqrt(2.0 * kPi) *
                      std::exp(Complex(-kPi * nu / 2.0, kPi / 4.0)) * nu;
    return c * params.rho0;
}

namespace {

void check_sector(Complex z, Sector sector) {
    if (z == 0.0) throw DomainError("psi_entries: z = 0 lies on every sector boundary");
    const double arg = std::arg(z);
    const bool inside = sector == Sector::lower ? (arg > -3.0 * kPi / 4.0 && arg < -kPi / 4.0)
                                                : (arg > -kPi / 4.0 && arg < kPi / 4.0);
    if (!inside) {
        throw DomainError(fmt::format("psi_entries: arg z = {} outside the requested sector", arg));
    }
}

PsiEntries assemble(const ModelParameters& p, Complex z, Sector sector,
                    const specfun::AccuracyBudget& budget) {
    const double nu = p.nu;
    const Complex a = p.a();
    const Row2 b21 = beta21_of(p);
    const Complex w_plus = std::polar(1.0, kPi / 4.0) * z;
    PsiEntries out;
    out.psi22 = std::exp(-kPi * nu / 4.0) * pcf_d(a, w_plus, budget);
    out.beta21_psi12 = std::exp(Complex(-kPi * nu / 4.0, kPi / 4.0)) * a * pcf_d(a - 1.0, w_plus, budget);
    if (sector == Sector::lower) {
        const Complex w = std::polar(1.0, 3.0 * kPi / 4.0) * z;
        out.beta21_psi11 = b21 * (std::exp(3.0 * kPi * nu / 4.0) * pcf_d(-a, w, budget));
        out.psi21 = b21 * (std::exp(Complex(3.0 * kPi * nu / 4.0, kPi / 4.0)) * pcf_d(-a - 1.0, w, budget));
    } else {
        const Complex w = std::polar(1.0, -kPi / 4.0) * z;
        out.beta21_psi11 = b21 * (std::exp(-kPi * nu / 4.0) * pcf_d(-a, w, budget));
        out.psi21 = b21 * (std::exp(Complex(-kPi * nu / 4.0, -3.0 * kPi / 4.0)) * pcf_d(-a - 1.0, w, budget));
    }
    return out;
}

}  // namespace

PsiEntries psi_entries(const ModelParameters& params, Complex z, Sector sector,
                       const specfun::AccuracyBudget& budget) {
    check_sector(z, sector);
    return assemble(params, z, sector, budget);
}

JumpResidual jump_residual_ray_detail(const ModelParameters& params, double r,
                                      const specfun::AccuracyBudget& budget) {
    if (!(r > 0.0)) throw DomainError("jump_residual_ray: r must be positive");
    const double nu = params.nu;
    const Complex a = params.a();
    const Row2 b21 = beta21_of(params);
    const Complex ir(0.0, r);
    // lower sector limit minus lower-right sector limit of beta21 Psi11 on the ray
    const Row2 lower = b21 * (std::exp(3.0 * kPi * nu / 4.0) * pcf_d(-a, ir, budget));
    const Row2 lower_right = b21 * (std::exp(-kPi * nu / 4.0) * pcf_d(-a, -ir, budget));
    const Complex coupling =
        std::exp(Complex(-kPi * nu / 4.0, kPi / 4.0)) * a * pcf_d(a - 1.0, Complex(r, 0.0), budget);
    const Row2 third = coupling * params.rho0;
    const double scale = std::max({lower.norm(), lower_right.norm(), third.norm()});
    return {(lower - lower_right + third).norm(), scale};
}

double jump_residual_ray(const ModelParameters& params, double r,
                         const specfun::AccuracyBudget& budget) {
    return jump_residual_ray_detail(params, r, budget).residual;
}

double first_order_residual(const ModelParameters& params, Complex z, Sector sector, double h,
                            const specfun::AccuracyBudget& budget) {
    if (!(h > 0.0)) throw DomainError("first_order_residual: h must be positive");
    check_sector(z, sector);
    const double nu = params.nu;
    const PsiEntries c = assemble(params, z, sector, budget);
    const PsiEntries p = assemble(params, z + h, sector, budget);
    const PsiEntries m = assemble(params, z - h, sector, budget);
    const Complex iz2 = kI * z / 2.0;
    const double r1 = std::abs((p.beta21_psi12 - m.beta21_psi12) / (2.0 * h) -
                               (iz2 * c.beta21_psi12 - nu * c.psi22));
    const double r2 = std::abs((p.psi22 - m.psi22) / (2.0 * h) - (-iz2 * c.psi22 + c.beta21_psi12));
    const double r3 = ((p.beta21_psi11 - m.beta21_psi11) / (2.0 * h) -
                       (iz2 * c.beta21_psi11 - nu * c.psi21)).norm();
    const double r4 = ((p.psi21 - m.psi21) / (2.0 * h) - (-iz2 * c.psi21 + c.beta21_psi11)).norm();
    return std::max(std::max(r1, r2), std::max(r3, r4));
}

double weber_residual_psi22(const ModelParameters& params, Complex z, double h,
                            const specfun::AccuracyBudget& budget) {
    if (!(h > 0.0)) throw DomainError("weber_residual_psi22: h must be positive");
    const double nu = params.nu;
    const Complex a = params.a();
    const Complex rot = std::polar(1.0, kPi / 4.0);
    auto psi22 = [&](Complex s) { return std::exp(-kPi * nu / 4.0) * pcf_d(a, rot * s, budget); };
    const Complex g0 = psi22(z);
    const Complex second = (psi22(z + h) - 2.0 * g0 + psi22(z - h)) / (h * h);
    return std::abs(second - (Complex(-z * z / 4.0 - nu) - kI / 2.0) * g0);
}

}  // namespace sasatk::model_rhp
