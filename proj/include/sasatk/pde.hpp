#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "sasatk/asymptotics.hpp"
#include "sasatk/scattering.hpp"
#include "sasatk/types.hpp"

namespace sasatk::pde {

// Periodic grid x_j = -L + j dx, j = 0..n-1, dx = 2L/n.
struct SimGrid {
    double half_width = 0.0;
    std::size_t n_modes = 0;

    double dx() const { return 2.0 * half_width / static_cast<double>(n_modes); }
    double x(std::size_t j) const { return -half_width + dx() * static_cast<double>(j); }
    // FFT-ordered wavenumbers
    std::vector<double> wavenumbers() const;
    void validate() const;
};

struct FieldState {
    double t = 0.0;
    std::vector<Complex> u;
};

double mass(const std::vector<Complex>& u, const SimGrid& grid);

// Integrating-factor RK4 for u_t = u_xxx + 6|u|^2 u_x + 3u(|u|^2)_x.
// The linear part e^{-i kappa^3 t} is applied exactly; products are formed
// from modes with |kappa| below 2/3 of the Nyquist wavenumber.
class Solver {
public:
    explicit Solver(const SimGrid& grid);
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    const SimGrid& grid() const { return grid_; }

    std::vector<Complex> nonlinear_term(const std::vector<Complex>& u);
    FieldState step(const FieldState& state, double dt);
    // Advances in place by n steps of size dt (spectral state kept between steps).
    void advance(FieldState& state, double dt, std::size_t n);

    std::vector<Complex> to_spectral(const std::vector<Complex>& u);
    std::vector<Complex> to_physical(const std::vector<Complex>& u_hat);

private:
    struct Impl;
    SimGrid grid_;
    std::unique_ptr<Impl> impl_;
};

std::vector<Complex> nonlinear_term(const std::vector<Complex>& u, const SimGrid& grid);
FieldState step(const FieldState& state, double dt, const SimGrid& grid);

// Exact solution of u_t = u_xxx from the given state.
std::vector<Complex> linear_evolution(const std::vector<Complex>& u0, const SimGrid& grid, double t);

FieldState sample_initial(const scattering::InitialProfile& profile, const SimGrid& grid);

struct SimOptions {
    double mass_rate_tol = 1e-10;     // relative drift allowed per unit time
    double contamination_tol = 1e-8;  // max |u| allowed in the edge bands
    double edge_fraction = 0.02;      // width of each edge band, fraction of 2L
    bool check_contamination = true;
};

// Snapshot times must be strictly increasing, in [0, t_end]; the last step
// before each snapshot is shortened to land on it.
std::vector<FieldState> simulate(const FieldState& initial, const SimGrid& grid, double dt,
                                 double t_end, const std::vector<double>& snapshot_times,
                                 const SimOptions& opts = {});
std::vector<FieldState> simulate(const scattering::InitialProfile& profile, const SimGrid& grid,
                                 double dt, double t_end, const std::vector<double>& snapshot_times,
                                 const SimOptions& opts = {});

// Trigonometric interpolation of the periodic samples at x.
Complex interpolate(const FieldState& state, const SimGrid& grid, double x);

struct ComparisonRow {
    double t;
    double zeta;
    double x;
    Complex u_num;
    Complex u_as_over_sqrt_t;
    double abs_err;
};

struct ExponentFit {
    double zeta;
    std::optional<double> exponent;  // empty when any error is exactly zero
};

struct Comparison {
    std::vector<ComparisonRow> rows;
    std::vector<ExponentFit> fits;
};

using ContextBuilder = std::function<asymptotics::AsymptoticContext(double zeta, double t)>;

// Errors at x = zeta t for each snapshot and each zeta; least-squares slope
// of log e against log t per zeta.
Comparison compare_asymptotic(const std::vector<FieldState>& snapshots, const SimGrid& grid,
                              const ContextBuilder& ctx_builder, const std::vector<double>& zetas,
                              double M = asymptotics::kDefaultM);

}  // namespace sasatk::pde
