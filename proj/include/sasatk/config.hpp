#pragma once

// Flat configuration file, one `key = value` per line, `#` starts a comment.
// Lists are comma separated. Unknown keys are rejected.
//
//   profile          path to a CSV `x,re_u0,im_u0`, or `gaussian`
//   gaussian_x_min, gaussian_x_max, gaussian_n   grid for the built-in profile
//   amplitude_scale  multiplies u0 (default 1)
//   decay_tol        boundary decay tolerance (1e-12)
//   k_window         lo, hi of the reflection table (default -3k0-1, 3k0+1)
//   k_count          reflection table size (801)
//   zeta             similarity variable for asym (1)
//   zetas            list for compare (defaults to zeta)
//   t_list           snapshot / evaluation times (20, 40, 80)
//   M                admissible zeta bound (10)
//   sim_half_width, sim_n_modes, sim_dt          periodic solver grid
//   mass_rate_tol, contamination_tol, edge_fraction
//   ode_tol, quad_tol, budget                    tolerances
//   modelcheck_nu, modelcheck_r                  lists
//   signature_half_width, signature_points       square grid for the sign map
//   threads          worker threads for the k-grid (0: all cores)

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sasatk/scattering.hpp"

namespace sasatk::config {

struct SimSettings {
    double half_width = 8192.0;
    std::size_t n_modes = 65536;
    double dt = 0.01;
};

struct Tolerances {
    double ode_tol = 1e-10;
    double quad_tol = 1e-9;
    double budget = 1e-10;
};

struct RunConfig {
    std::string profile_path = "gaussian";
    double gaussian_x_min = -12.0;
    double gaussian_x_max = 12.0;
    std::size_t gaussian_n = 2401;
    double amplitude_scale = 1.0;
    double decay_tol = 1e-12;
    std::optional<std::pair<double, double>> k_window;
    std::size_t k_count = 801;
    double zeta = 1.0;
    std::vector<double> zetas;
    std::vector<double> t_list{20.0, 40.0, 80.0};
    double M = 10.0;
    SimSettings sim;
    double mass_rate_tol = 1e-6;
    double contamination_tol = 1e-4;
    double edge_fraction = 0.02;
    Tolerances tolerances;
    std::vector<double> modelcheck_nu{0.1, 0.3, 1.0};
    std::vector<double> modelcheck_r{0.2, 1.0, 5.0};
    double signature_half_width = 2.0;
    std::size_t signature_points = 101;
    unsigned threads = 0;

    // Throws ConfigError when an invariant fails.
    void validate() const;
    std::vector<double> compare_zetas() const { return zetas.empty() ? std::vector<double>{zeta} : zetas; }
};

RunConfig parse(const std::string& text, const std::string& origin = "<config>");
// A relative profile path is taken relative to the config file.
RunConfig load(const std::string& path);

// e^{-x^2} on the gaussian_* grid, or the profile file; u0 scaled by amplitude_scale.
scattering::InitialProfile make_profile(const RunConfig& cfg);

// [k_lo, k_hi]: k_window, else +-(3 k0 + 1) for the largest configured zeta.
std::pair<double, double> table_window(const RunConfig& cfg);

}  // namespace sasatk::config
