#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sasatk/types.hpp"

namespace sasatk::scattering {

// Initial datum sampled on a uniform grid x_i = x_min + i (x_max - x_min)/(n-1).
struct InitialProfile {
    double x_min = 0.0;
    double x_max = 0.0;
    std::vector<Complex> u0;
    double decay_tol = 1e-12;

    std::size_t n() const { return u0.size(); }
    double dx() const { return (x_max - x_min) / static_cast<double>(u0.size() - 1); }
    double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }

    // Throws DomainError for a malformed grid, DecayViolationError when the
    // boundary samples are not negligible.
    void validate() const;

    static InitialProfile sample(const std::function<Complex(double)>& f, double x_min,
                                 double x_max, std::size_t n, double decay_tol = 1e-12);
    static InitialProfile gaussian(Complex amplitude, double x_min, double x_max, std::size_t n,
                                   double decay_tol = 1e-12);

    // CSV `x,re_u0,im_u0`. Rows must be strictly increasing and uniformly spaced.
    static InitialProfile read_csv(const std::string& path, double decay_tol = 1e-12);
    void write_csv(const std::string& path) const;

    // Cubic-spline values at arbitrary points; zero outside [x_min, x_max].
    std::vector<Complex> resample(const std::vector<double>& xs) const;
};

struct ScatteringMatrix {
    double k = 0.0;
    Mat3 s = Mat3::Identity();

    double det_residual() const;         // |det s - 1|
    double unitarity_residual() const;   // ||s^dagger s - I|| (Frobenius)
};

// s(k) from the x-part of the Lax pair, integrated in the frame
// m = e^{ikx sigma_hat} mu_1, m' = (e^{ikx sigma_hat} U) m, m(x_min) = I.
ScatteringMatrix scattering_matrix(const InitialProfile& profile, double k, double tol);

// ||s(-k) - G conj(s(k)) G|| with G the 1<->2 permutation.
double conjugation_residual(const ScatteringMatrix& s_minus, const ScatteringMatrix& s_plus);

inline constexpr double kS33ZeroThreshold = 1e-6;

// (s31/s33, s32/s33). Throws NearZeroS33Error when |s33| < zero_threshold.
Row2 reflection(const ScatteringMatrix& s, double zero_threshold = kS33ZeroThreshold);

// ln(1 + rho rho^dagger) / (2 pi)
double nu_of(const Row2& rho);

// Zeros of s33 in the lower half-plane, from the winding of arg s33 along
// [-k_max, k_max] (s33 -> 1 at both ends). Nonzero means soliton content.
int lower_zero_count(const InitialProfile& profile, double k_max = 20.0, std::size_t count = 4001,
                     double tol = 1e-10);

struct ReflectionTable {
    std::vector<double> k_nodes;  // uniform, increasing
    std::vector<Row2> rho;
    std::vector<double> rho_norm_sq;

    std::size_t size() const { return k_nodes.size(); }
    double spacing() const;

    // Node structure and rho_norm_sq consistency.
    void validate() const;
    // max |rho(-k) - swap_conj(rho(k))| over mirrored node pairs.
    double symmetry_residual() const;

    static ReflectionTable from_rho(std::vector<double> k_nodes, std::vector<Row2> rho);
    static ReflectionTable read_csv(const std::string& path);
    void write_csv(const std::string& path) const;
};

struct TableOptions {
    double tol = 1e-10;
    double zero_threshold = kS33ZeroThreshold;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct SymmetryReport {
    double max_det = 0.0;
    double max_unitarity = 0.0;
    double max_conjugation = 0.0;
    double max_rho_symmetry = 0.0;
};

struct ScatterResult {
    ReflectionTable table;
    std::vector<ScatteringMatrix> matrices;
    SymmetryReport report;
};

// Parallel map of scattering_matrix over a uniform grid of count nodes on
// [k_lo, k_hi]. The grid must be symmetric about 0 for the conjugation report.
ScatterResult scatter_grid(const InitialProfile& profile, double k_lo, double k_hi,
                           std::size_t count, const TableOptions& opts = {});

// Default window [-3k0 - 1, 3k0 + 1] with 801 nodes.
ScatterResult scatter_default(const InitialProfile& profile, double k0,
                              const TableOptions& opts = {});

// ln(1 + rho rho^dagger) interpolated on the table.
class LogGInterpolant {
public:
    explicit LogGInterpolant(const ReflectionTable& table);
    double operator()(double k) const;
    double prime(double k) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double lo_, hi_;
    std::function<double(double)> f_;
    std::function<double(double)> fp_;
};

enum class Endpoint { plus, minus };

struct ChiOptions {
    double agree_tol = 1e-9;        // successive-doubling agreement
    double max_spacing = 0.02;      // node spacing bound near +-k0, in units of max(k0, 1)
    double symmetry_tol = 1e-8;     // |g(k0) - g(-k0)|
    double cutoff = 1e-8;           // det_delta: minimum distance to +-k0
    double abs_tol = 1e-13;         // det_delta adaptive quadrature
};

// chi(+-k0) = (1/2 pi i) int_{-k0}^{k0} ln(g(xi)/g(k0)) / (xi -+ k0) dxi with g = 1 + rho rho^dagger.
Complex chi_of(const ReflectionTable& table, double k0, Endpoint at, const ChiOptions& opts = {});

// chi(k) for complex k off [-k0, k0].
Complex chi_general(const ReflectionTable& table, double k0, Complex k, const ChiOptions& opts = {});

// ((k - k0)/(k + k0))^{-i nu} e^{chi(k)}, nu = ln g(k0) / 2 pi.
Complex det_delta(const ReflectionTable& table, double k0, Complex k, const ChiOptions& opts = {});

// [[I, rho^dagger e^{-t Phi}], [rho e^{t Phi}, 1 + rho rho^dagger]], Phi = 2 i zeta k - 8 i k^3.
Mat3 build_jump(const Row2& rho_k, double x, double t, double k, double zeta);

}  // namespace sasatk::scattering
