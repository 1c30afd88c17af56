#pragma once

// Parabolic-cylinder solution of the model problem
//   dPsi/dz = (iz/2 sigma + beta) Psi,  beta = [[0, beta12], [beta21, 0]],
// with beta21 a 1x2 row, beta12 = -beta21^dagger and a = i beta21 beta12 = -i nu.
// Only the combinations that fix the solution in the two sectors
// arg z in (-3pi/4, -pi/4) and (-pi/4, pi/4) are assembled.

#include "sasatk/specfun.hpp"
#include "sasatk/types.hpp"

namespace sasatk::model_rhp {

struct ModelParameters {
    double nu = 0.0;
    Row2 rho0 = Row2::Zero();

    Complex a() const { return Complex(0.0, -nu); }
    // |nu - ln(1 + rho0 rho0^dagger)/(2 pi)|
    double consistency_residual() const;
    bool consistent(double tol = 1e-12) const { return consistency_residual() <= tol; }

    // rho0 = direction rescaled so that ln(1 + |rho0|^2) = 2 pi nu.
    static ModelParameters from_nu(double nu, const Row2& direction);
};

// Gamma(-i nu)/sqrt(2 pi) e^{i pi/4 - pi nu/2} nu rho0
Row2 beta21_of(const ModelParameters& params);

enum class Sector { lower, lower_right };

struct PsiEntries {
    Complex psi22;
    Row2 beta21_psi11;
    Row2 psi21;
    Complex beta21_psi12;
};

// Throws DomainError when z is not strictly inside the sector.
PsiEntries psi_entries(const ModelParameters& params, Complex z, Sector sector,
                       const specfun::AccuracyBudget& budget = {});

// Residual of the jump relation on arg z = -pi/4 at z = r e^{-i pi/4}.
double jump_residual_ray(const ModelParameters& params, double r,
                         const specfun::AccuracyBudget& budget = {});

struct JumpResidual {
    double residual;
    // Largest of the three terms; the two D_{-a}(+-ir) terms grow like e^{r^2/4}
    // and cancel, so residual/scale is the meaningful figure for large r.
    double scale;
};
JumpResidual jump_residual_ray_detail(const ModelParameters& params, double r,
                                      const specfun::AccuracyBudget& budget = {});

// Largest absolute residual of the four scalar/row first-order equations,
// derivatives by central differences of step h.
double first_order_residual(const ModelParameters& params, Complex z, Sector sector, double h,
                            const specfun::AccuracyBudget& budget = {});

// |Psi22'' - (-i/2 - z^2/4 - nu) Psi22| with a central second difference.
double weber_residual_psi22(const ModelParameters& params, Complex z, double h,
                            const specfun::AccuracyBudget& budget = {});

}  // namespace sasatk::model_rhp
