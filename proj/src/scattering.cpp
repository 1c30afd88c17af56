#include "sasatk/scattering.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <queue>
#include <thread>

#include "sasatk/csv.hpp"
#include "sasatk/errors.hpp"

namespace sasatk::scattering {

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
using State = std::array<Complex, 9>;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Nodes c + hw (2j - (n-1))/(n-1); mirrored exactly when c = 0.
std::vector<double> uniform_nodes(double lo, double hi, std::size_t count) {
    const double c = 0.5 * (lo + hi);
    const double hw = 0.5 * (hi - lo);
    const double m = static_cast<double>(count - 1);
    std::vector<double> k(count);
    for (std::size_t j = 0; j < count; ++j) {
        k[j] = c + hw * (2.0 * static_cast<double>(j) - m) / m;
    }
    return k;
}

class ProfileSpline {
public:
    explicit ProfileSpline(const InitialProfile& p) : lo_(p.x_min), hi_(p.x_max) {
        std::vector<double> re(p.n()), im(p.n());
        for (std::size_t i = 0; i < p.n(); ++i) {
            re[i] = p.u0[i].real();
            im[i] = p.u0[i].imag();
        }
        re_ = std::make_unique<Spline>(re.data(), re.size(), p.x_min, p.dx(), 0.0, 0.0);
        im_ = std::make_unique<Spline>(im.data(), im.size(), p.x_min, p.dx(), 0.0, 0.0);
    }

    Complex operator()(double x) const {
        if (x <= lo_ || x >= hi_) return 0.0;
        return {(*re_)(x), (*im_)(x)};
    }

private:
    double lo_, hi_;
    std::unique_ptr<Spline> re_, im_;
};

void check_symmetric_grid(const std::vector<double>& k) {
    const double h = k.size() > 1 ? k[1] - k[0] : 1.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (std::abs(k[j] + k[k.size() - 1 - j]) > 1e-9 * h) {
            throw DomainError("k-grid is not symmetric about 0");
        }
    }
}

}  // namespace

void InitialProfile::validate() const {
    if (u0.size() < 16) throw DomainError("InitialProfile: need at least 16 samples");
    if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max)) {
        throw DomainError("InitialProfile: need finite x_min < x_max");
    }
    if (!(decay_tol >= 0.0)) throw DomainError("InitialProfile: decay_tol must be >= 0");
    for (const auto& v : u0) {
        if (!finite(v)) throw DomainError("InitialProfile: non-finite sample");
    }
    const double left = std::abs(u0.front());
    const double right = std::abs(u0.back());
    if (left > decay_tol || right > decay_tol) {
        throw DecayViolationError(fmt::format(
            "InitialProfile: |u0| at the boundary is {:.3e} (left) / {:.3e} (right), above decay_tol {:.3e}",
            left, right, decay_tol));
    }
}

InitialProfile InitialProfile::sample(const std::function<Complex(double)>& f, double x_min,
                                      double x_max, std::size_t n, double decay_tol) {
    InitialProfile p;
    p.x_min = x_min;
    p.x_max = x_max;
    p.decay_tol = decay_tol;
    p.u0.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.u0[i] = f(p.x(i));
    return p;
}

InitialProfile InitialProfile::gaussian(Complex amplitude, double x_min, double x_max,
                                        std::size_t n, double decay_tol) {
    return sample([amplitude](double x) { return amplitude * std::exp(-x * x); }, x_min, x_max,
                  n, decay_tol);
}

InitialProfile InitialProfile::read_csv(const std::string& path, double decay_tol) {
    const auto t = csv::read(path, {"x", "re_u0", "im_u0"});
    if (t.rows.size() < 2) throw IoError(path + ": too few rows");
    InitialProfile p;
    p.decay_tol = decay_tol;
    p.x_min = t.rows.front()[0];
    p.x_max = t.rows.back()[0];
    const double h = (p.x_max - p.x_min) / static_cast<double>(t.rows.size() - 1);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        if (i > 0 && !(r[0] > t.rows[i - 1][0])) {
            throw IoError(fmt::format("{}: x not strictly increasing at row {}", path, i + 1));
        }
        if (std::abs(r[0] - (p.x_min + h * static_cast<double>(i))) > 1e-6 * h) {
            throw IoError(fmt::format("{}: grid not uniform at row {}", path, i + 1));
        }
        p.u0.emplace_back(r[1], r[2]);
    }
    return p;
}

void InitialProfile::write_csv(const std::string& path) const {
    csv::Writer w(path, {"x", "re_u0", "im_u0"});
    for (std::size_t i = 0; i < n(); ++i) w.row({x(i), u0[i].real(), u0[i].imag()});
    w.close();
}

std::vector<Complex> InitialProfile::resample(const std::vector<double>& xs) const {
    validate();
    const ProfileSpline spline(*this);
    std::vector<Complex> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = spline(xs[i]);
    return out;
}

double ScatteringMatrix::det_residual() const { return std::abs(s.determinant() - 1.0); }

double ScatteringMatrix::unitarity_residual() const {
    return (s.adjoint() * s - Mat3::Identity()).norm();
}

ScatteringMatrix scattering_matrix(const InitialProfile& profile, double k, double tol) {
    profile.validate();
    if (!std::isfinite(k)) throw DomainError("scattering_matrix: k must be finite");
    if (!(tol > 0.0)) throw DomainError("scattering_matrix: tol must be positive");

    namespace ode = boost::numeric::odeint;
    const ProfileSpline u(profile);
    auto rhs = [&](const State& m, State& dm, double x) {
        const Complex q = u(x);
        const Complex e = std::polar(1.0, 2.0 * k * x);
        const Complex u02 = q * e;
        const Complex u12 = std::conj(q) * e;
        const Complex u20 = -std::conj(q) * std::conj(e);
        const Complex u21 = -q * std::conj(e);
        for (int j = 0; j < 3; ++j) {
            dm[j] = u02 * m[6 + j];
            dm[3 + j] = u12 * m[6 + j];
            dm[6 + j] = u20 * m[j] + u21 * m[3 + j];
        }
    };

    auto stepper = ode::make_controlled(
        tol, tol, ode::runge_kutta_dopri5<State, double, State, double, ode::array_algebra>());
    State m{};
    m[0] = m[4] = m[8] = 1.0;
    double x = profile.x_min;
    const double span = profile.x_max - profile.x_min;
    const double h_min = 1e-12 * span;
    double h = profile.dx();
    while (x < profile.x_max) {
        if (x + h > profile.x_max) h = profile.x_max - x;
        const double x_before = x;
        const auto res = stepper.try_step(rhs, m, x, h);
        if (res == ode::fail && h < h_min) {
            throw StepUnderflowError(fmt::format(
                "scattering_matrix: step size {:.3e} below minimum at x = {:.6g}, k = {:.6g}", h,
                x_before, k));
        }
        if (res == ode::success && x >= profile.x_max - 1e-15 * span) break;
    }

    ScatteringMatrix out;
    out.k = k;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out.s(i, j) = m[3 * i + j];
            if (!finite(out.s(i, j))) throw StepUnderflowError("scattering_matrix: non-finite solution");
        }
    }
    return out;
}

double conjugation_residual(const ScatteringMatrix& s_minus, const ScatteringMatrix& s_plus) {
    const Mat3 g = perm12();
    return (s_minus.s - g * s_plus.s.conjugate() * g).norm();
}

Row2 reflection(const ScatteringMatrix& s, double zero_threshold) {
    const Complex s33 = s.s(2, 2);
    if (std::abs(s33) < zero_threshold) {
        throw NearZeroS33Error(
            fmt::format("|s33| = {:.3e} below {:.1e} at k = {:.17g}", std::abs(s33), zero_threshold, s.k),
            s.k);
    }
    Row2 r;
    r << s.s(2, 0) / s33, s.s(2, 1) / s33;
    return r;
}

double nu_of(const Row2& rho) { return std::log1p(norm_sq(rho)) / (2.0 * kPi); }

int lower_zero_count(const InitialProfile& profile, double k_max, std::size_t count, double tol) {
    if (!(k_max > 0.0) || count < 3) throw DomainError("lower_zero_count: need k_max > 0 and count >= 3");
    TableOptions opts;
    opts.tol = tol;
    opts.zero_threshold = 0.0;
    const auto res = scatter_grid(profile, -k_max, k_max, count, opts);
    double winding = 0.0;
    for (std::size_t i = 1; i < res.matrices.size(); ++i) {
        winding += std::arg(res.matrices[i].s(2, 2) / res.matrices[i - 1].s(2, 2));
    }
    const double ends = std::arg(res.matrices.back().s(2, 2)) - std::arg(res.matrices.front().s(2, 2));
    // continuous change minus principal-value change: whole turns
    return static_cast<int>(std::lround(-(winding - ends) / (2.0 * kPi)));
}

double ReflectionTable::spacing() const {
    if (k_nodes.size() < 2) return 0.0;
    return (k_nodes.back() - k_nodes.front()) / static_cast<double>(k_nodes.size() - 1);
}

void ReflectionTable::validate() const {
    if (k_nodes.size() < 4) throw DomainError("ReflectionTable: need at least 4 nodes");
    if (rho.size() != k_nodes.size() || rho_norm_sq.size() != k_nodes.size()) {
        throw DomainError("ReflectionTable: column lengths differ");
    }
    const double h = spacing();
    if (!(h > 0.0)) throw DomainError("ReflectionTable: nodes must be increasing");
    for (std::size_t j = 0; j < k_nodes.size(); ++j) {
        const double expect = k_nodes.front() + h * static_cast<double>(j);
        if (std::abs(k_nodes[j] - expect) > 1e-6 * h) {
            throw DomainError(fmt::format("ReflectionTable: non-uniform node {}", j));
        }
        const double n2 = norm_sq(rho[j]);
        if (!(rho_norm_sq[j] >= 0.0) || std::abs(rho_norm_sq[j] - n2) > 1e-12 * (1.0 + n2)) {
            throw DomainError(fmt::format("ReflectionTable: rho_norm_sq inconsistent at node {}", j));
        }
    }
}

double ReflectionTable::symmetry_residual() const {
    check_symmetric_grid(k_nodes);
    double worst = 0.0;
    for (std::size_t j = 0; j < size(); ++j) {
        const std::size_t m = size() - 1 - j;
        worst = std::max(worst, (rho[m] - swap_conj(rho[j])).norm());
    }
    return worst;
}

ReflectionTable ReflectionTable::from_rho(std::vector<double> k_nodes, std::vector<Row2> rho) {
    ReflectionTable t;
    t.k_nodes = std::move(k_nodes);
    t.rho = std::move(rho);
    t.rho_norm_sq.reserve(t.rho.size());
    for (const auto& r : t.rho) t.rho_norm_sq.push_back(norm_sq(r));
    return t;
}

ReflectionTable ReflectionTable::read_csv(const std::string& path) {
    const auto csv_table =
        csv::read(path, {"k", "re_rho1", "im_rho1", "re_rho2", "im_rho2", "rho_norm_sq"});
    ReflectionTable t;
    for (const auto& r : csv_table.rows) {
        t.k_nodes.push_back(r[0]);
        Row2 rho;
        rho << Complex(r[1], r[2]), Complex(r[3], r[4]);
        t.rho.push_back(rho);
        t.rho_norm_sq.push_back(r[5]);
    }
    t.validate();
    return t;
}

void ReflectionTable::write_csv(const std::string& path) const {
    csv::Writer w(path, {"k", "re_rho1", "im_rho1", "re_rho2", "im_rho2", "rho_norm_sq"});
    for (std::size_t j = 0; j < size(); ++j) {
        w.row({k_nodes[j], rho[j](0).real(), rho[j](0).imag(), rho[j](1).real(), rho[j](1).imag(),
               rho_norm_sq[j]});
    }
    w.close();
}

ScatterResult scatter_grid(const InitialProfile& profile, double k_lo, double k_hi,
                           std::size_t count, const TableOptions& opts) {
    profile.validate();
    if (count < 4) throw DomainError("scatter_grid: need at least 4 nodes");
    if (!(k_lo < k_hi)) throw DomainError("scatter_grid: need k_lo < k_hi");
    const std::vector<double> k = uniform_nodes(k_lo, k_hi, count);

    ScatterResult out;
    out.matrices.resize(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= count) return;
            try {
                out.matrices[j] = scattering_matrix(profile, k[j], opts.tol);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
                return;
            }
        }
    };
    unsigned n_threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(count)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<Row2> rho;
    rho.reserve(count);
    for (const auto& s : out.matrices) {
        rho.push_back(reflection(s, opts.zero_threshold));
        out.report.max_det = std::max(out.report.max_det, s.det_residual());
        out.report.max_unitarity = std::max(out.report.max_unitarity, s.unitarity_residual());
    }
    out.table = ReflectionTable::from_rho(k, std::move(rho));
    if (std::abs(k_lo + k_hi) <= 1e-12 * (k_hi - k_lo)) {
        for (std::size_t j = 0; j < count; ++j) {
            out.report.max_conjugation = std::max(
                out.report.max_conjugation, conjugation_residual(out.matrices[count - 1 - j], out.matrices[j]));
        }
        out.report.max_rho_symmetry = out.table.symmetry_residual();
    } else {
        out.report.max_conjugation = std::numeric_limits<double>::quiet_NaN();
        out.report.max_rho_symmetry = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

ScatterResult scatter_default(const InitialProfile& profile, double k0, const TableOptions& opts) {
    if (!(k0 > 0.0)) throw DomainError("scatter_default: k0 must be positive");
    const double w = 3.0 * k0 + 1.0;
    return scatter_grid(profile, -w, w, 801, opts);
}

LogGInterpolant::LogGInterpolant(const ReflectionTable& table) {
    table.validate();
    std::vector<double> g(table.size());
    for (std::size_t j = 0; j < table.size(); ++j) g[j] = std::log1p(table.rho_norm_sq[j]);
    lo_ = table.k_nodes.front();
    hi_ = table.k_nodes.back();
    auto spline = std::make_shared<Spline>(g.data(), g.size(), lo_, table.spacing());
    f_ = [spline](double k) { return (*spline)(k); };
    fp_ = [spline](double k) { return spline->prime(k); };
}

double LogGInterpolant::operator()(double k) const {
    if (k < lo_ || k > hi_) throw DomainError(fmt::format("ln g requested outside the table at k = {}", k));
    return f_(k);
}

double LogGInterpolant::prime(double k) const {
    if (k < lo_ || k > hi_) throw DomainError(fmt::format("ln g' requested outside the table at k = {}", k));
    return fp_(k);
}

namespace {

// Panel breakpoints on [-k0, k0]: the endpoints plus every table node inside.
std::vector<double> panel_breaks(const ReflectionTable& table, double k0, double extra = std::nan("")) {
    const double h = table.spacing();
    std::vector<double> b{-k0, k0};
    for (double k : table.k_nodes) {
        if (k > -k0 && k < k0) b.push_back(k);
    }
    if (std::isfinite(extra) && extra > -k0 && extra < k0) b.push_back(extra);
    std::sort(b.begin(), b.end());
    std::vector<double> out{b.front()};
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (b[i] - out.back() > 1e-6 * h) {
            out.push_back(b[i]);
        } else if (i == b.size() - 1) {
            out.back() = b[i];
        }
    }
    return out;
}

void check_resolution(const ReflectionTable& table, double k0, const ChiOptions& opts) {
    if (!(k0 > 0.0)) throw DomainError("k0 must be positive");
    if (table.k_nodes.front() > -k0 || table.k_nodes.back() < k0) {
        throw ResolutionError(fmt::format("table [{}, {}] does not cover [-k0, k0] = [{}, {}]",
                                          table.k_nodes.front(), table.k_nodes.back(), -k0, k0));
    }
    const double h = table.spacing();
    if (h > opts.max_spacing * std::max(k0, 1.0) || h > 0.25 * k0) {
        throw ResolutionError(fmt::format(
            "table spacing {:.3e} too coarse near k0 = {:.6g} (bound {:.3e})", h, k0,
            std::min(opts.max_spacing * std::max(k0, 1.0), 0.25 * k0)));
    }
}

template <int N, class F>
double gl_composite(const F& f, const std::vector<double>& breaks) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        sum += boost::math::quadrature::gauss<double, N>::integrate(f, breaks[i], breaks[i + 1]);
    }
    return sum;
}

// Global adaptive Gauss-Kronrod (7/15): bisect the panel with the largest
// error estimate until the summed estimate drops below abs_tol + 1e-13 |I|.
template <class F>
Complex adaptive_gk(const F& f, const std::vector<double>& breaks, double abs_tol) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    struct Piece {
        double a, b;
        Complex value;
        double err;
        bool operator<(const Piece& o) const { return err < o.err; }
    };
    auto eval = [&](double a, double b) {
        double err = 0.0;
        const Complex v = GK::integrate(f, a, b, 0, 0.0, &err);
        // the reported estimate refers to the rescaled interval [-1, 1]
        return Piece{a, b, v, err * 0.5 * (b - a)};
    };
    std::priority_queue<Piece> heap;
    Complex total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Piece p = eval(breaks[i], breaks[i + 1]);
        total += p.value;
        total_err += p.err;
        heap.push(p);
    }
    const double min_width = 1e-10 * (breaks.back() - breaks.front());
    for (int iter = 0; iter < 20000; ++iter) {
        if (total_err <= abs_tol + 1e-13 * std::abs(total)) return total;
        Piece worst = heap.top();
        heap.pop();
        if (worst.b - worst.a < min_width) {
            // rounding-level jumps of the interpolant; nothing left to resolve
            total_err -= worst.err;
            worst.err = 0.0;
            heap.push(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Piece l = eval(worst.a, mid);
        const Piece r = eval(mid, worst.b);
        total += l.value + r.value - worst.value;
        total_err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
    }
    if (total_err <= 1e3 * (abs_tol + 1e-13 * std::abs(total))) return total;
    throw ResolutionError(fmt::format("adaptive quadrature stalled with error estimate {:.3e}", total_err));
}

}  // namespace

Complex chi_of(const ReflectionTable& table, double k0, Endpoint at, const ChiOptions& opts) {
    check_resolution(table, k0, opts);
    const LogGInterpolant lg(table);
    const double g_plus = lg(k0);
    const double g_minus = lg(-k0);
    if (std::abs(g_plus - g_minus) > opts.symmetry_tol) {
        throw SymmetryError(fmt::format("ln g(k0) - ln g(-k0) = {:.3e} exceeds {:.1e}",
                                        g_plus - g_minus, opts.symmetry_tol));
    }
    const double pole = at == Endpoint::plus ? k0 : -k0;
    const double g_pole = lg(pole);
    const double slope = lg.prime(pole);
    const double fill = std::sqrt(std::numeric_limits<double>::epsilon()) * table.spacing();
    auto f = [&](double xi) {
        const double d = xi - pole;
        if (std::abs(d) < fill) return slope;
        return (lg(xi) - g_pole) / d;
    };
    const auto breaks = panel_breaks(table, k0);

    double prev = gl_composite<4>(f, breaks);
    double cur = gl_composite<8>(f, breaks);
    if (std::abs(cur - prev) > opts.agree_tol) {
        prev = cur;
        cur = gl_composite<16>(f, breaks);
    }
    if (std::abs(cur - prev) > opts.agree_tol) {
        prev = cur;
        cur = gl_composite<32>(f, breaks);
    }
    if (std::abs(cur - prev) > opts.agree_tol) {
        prev = cur;
        cur = gl_composite<64>(f, breaks);
    }
    if (std::abs(cur - prev) > opts.agree_tol) {
        throw ResolutionError(fmt::format("chi quadrature did not settle: last change {:.3e}",
                                          std::abs(cur - prev)));
    }
    // (1/2 pi i) * real integral
    return Complex(0.0, -cur / (2.0 * kPi));
}

Complex chi_general(const ReflectionTable& table, double k0, Complex k, const ChiOptions& opts) {
    check_resolution(table, k0, opts);
    if (!finite(k)) throw DomainError("chi: k must be finite");
    if (std::abs(k - k0) < opts.cutoff || std::abs(k + k0) < opts.cutoff) {
        throw DomainError(fmt::format("chi: k = ({}, {}) within cutoff of +-k0", k.real(), k.imag()));
    }
    if (k.imag() == 0.0 && std::abs(k.real()) <= k0) {
        throw DomainError("chi: k on the cut [-k0, k0]");
    }
    const LogGInterpolant lg(table);
    const double g0 = lg(k0);
    const double star = std::clamp(k.real(), -k0, k0);
    const double f_star = lg(star) - g0;
    auto f = [&](double xi) { return (lg(xi) - g0 - f_star) / (xi - k); };
    const Complex sum_regular = adaptive_gk(f, panel_breaks(table, k0, star), opts.abs_tol);
    Complex sum = sum_regular;
    sum += f_star * std::log((k - k0) / (k + k0));
    return sum / (2.0 * kPi * kI);
}

Complex det_delta(const ReflectionTable& table, double k0, Complex k, const ChiOptions& opts) {
    const Complex chi = chi_general(table, k0, k, opts);
    const LogGInterpolant lg(table);
    const double nu = lg(k0) / (2.0 * kPi);
    return std::exp(-kI * nu * std::log((k - k0) / (k + k0)) + chi);
}

Mat3 build_jump(const Row2& rho_k, double x, double t, double k, double zeta) {
    if (!(std::isfinite(x) && std::isfinite(t) && std::isfinite(k) && std::isfinite(zeta))) {
        throw DomainError("build_jump: non-finite argument");
    }
    if (t != 0.0 && std::abs(x / t - zeta) > 1e-12 * std::max(1.0, std::abs(zeta))) {
        throw DomainError(fmt::format("build_jump: zeta = {} inconsistent with x/t = {}", zeta, x / t));
    }
    // t Phi = i (2 k x - 8 k^3 t) on the real axis.
    const Complex e = std::polar(1.0, 2.0 * k * x - 8.0 * k * k * k * t);
    Mat3 j = Mat3::Identity();
    j(2, 0) = rho_k(0) * e;
    j(2, 1) = rho_k(1) * e;
    j(0, 2) = std::conj(j(2, 0));
    j(1, 2) = std::conj(j(2, 1));
    j(2, 2) = 1.0 + norm_sq(rho_k);
    return j;
}

}  // namespace sasatk::scattering
