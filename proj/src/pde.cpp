#include "sasatk/pde.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "sasatk/errors.hpp"

namespace sasatk::pde {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(std::size_t n) { return n && !(n & (n - 1)); }

bool all_finite(const std::vector<Complex>& v) {
    for (const auto& z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::vector<double> SimGrid::wavenumbers() const {
    const std::size_t n = n_modes;
    const double base = kPi / half_width;  // 2 pi / (2L)
    std::vector<double> k(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double mm = m < n / 2 ? static_cast<double>(m)
                                    : static_cast<double>(m) - static_cast<double>(n);
        k[m] = base * mm;
    }
    return k;
}

void SimGrid::validate() const {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw DomainError("SimGrid: half_width must be positive");
    if (n_modes < 64 || !is_power_of_two(n_modes)) {
        throw DomainError(fmt::format("SimGrid: n_modes = {} must be a power of two >= 64", n_modes));
    }
}

double mass(const std::vector<Complex>& u, const SimGrid& grid) {
    double s = 0.0;
    for (const auto& z : u) s += std::norm(z);
    return s * grid.dx();
}

struct Solver::Impl {
    std::size_t n;
    std::vector<double> kappa;
    std::vector<double> mask;
    std::vector<Complex> e_half;  // e^{-i kappa^3 dt/2} for the cached dt
    std::vector<Complex> e_full;
    double cached_dt = std::nan("");

    Complex* buf_a;
    Complex* buf_b;
    fftw_plan forward;
    fftw_plan backward;

    std::vector<Complex> u, ux, w;
    std::vector<Complex> ka, kb, kc, kd, tmp;

    explicit Impl(const SimGrid& g) : n(g.n_modes), kappa(g.wavenumbers()), mask(n) {
        const double cut = (2.0 / 3.0) * (kPi / g.dx());
        for (std::size_t m = 0; m < n; ++m) mask[m] = std::abs(kappa[m]) < cut ? 1.0 : 0.0;
        mask[n / 2] = 0.0;
        buf_a = reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        buf_b = reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            const int ni = static_cast<int>(n);
            forward = fftw_plan_dft_1d(ni, as_fftw(buf_a), as_fftw(buf_b), FFTW_FORWARD, FFTW_ESTIMATE);
            backward = fftw_plan_dft_1d(ni, as_fftw(buf_a), as_fftw(buf_b), FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        u.resize(n);
        ux.resize(n);
        w.resize(n);
        ka.resize(n);
        kb.resize(n);
        kc.resize(n);
        kd.resize(n);
        tmp.resize(n);
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(buf_a);
        fftw_free(buf_b);
    }

    void fft(const std::vector<Complex>& in, std::vector<Complex>& out) {
        std::copy(in.begin(), in.end(), buf_a);
        fftw_execute_dft(forward, as_fftw(buf_a), as_fftw(buf_b));
        std::copy(buf_b, buf_b + n, out.begin());
    }

    void ifft(const std::vector<Complex>& in, std::vector<Complex>& out) {
        std::copy(in.begin(), in.end(), buf_a);
        fftw_execute_dft(backward, as_fftw(buf_a), as_fftw(buf_b));
        const double s = 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) out[j] = buf_b[j] * s;
    }

    // Spectral nonlinear term for spectral input v.
    void rhs(const std::vector<Complex>& v, std::vector<Complex>& out) {
        for (std::size_t m = 0; m < n; ++m) tmp[m] = mask[m] * v[m];
        ifft(tmp, u);
        for (std::size_t m = 0; m < n; ++m) tmp[m] = Complex(0.0, kappa[m]) * mask[m] * v[m];
        ifft(tmp, ux);
        for (std::size_t j = 0; j < n; ++j) {
            const double a2 = std::norm(u[j]);
            // (|u|^2)_x = 2 Re(conj(u) u_x)
            const double d = (std::conj(u[j]) * ux[j]).real();
            w[j] = 6.0 * a2 * ux[j] + 6.0 * d * u[j];
        }
        fft(w, out);
        for (std::size_t m = 0; m < n; ++m) out[m] *= mask[m];
    }

    void set_dt(double dt) {
        if (dt == cached_dt) return;
        e_half.resize(n);
        e_full.resize(n);
        for (std::size_t m = 0; m < n; ++m) {
            const double k3 = kappa[m] * kappa[m] * kappa[m];
            e_half[m] = std::polar(1.0, -k3 * dt / 2.0);
            e_full[m] = std::polar(1.0, -k3 * dt);
        }
        cached_dt = dt;
    }

    // v <- one integrating-factor RK4 step of size dt
    void rk4(std::vector<Complex>& v, double dt) {
        set_dt(dt);
        std::vector<Complex> stage(n);
        rhs(v, ka);
        for (std::size_t m = 0; m < n; ++m) {
            ka[m] *= dt;
            stage[m] = e_half[m] * (v[m] + 0.5 * ka[m]);
        }
        rhs(stage, kb);
        for (std::size_t m = 0; m < n; ++m) {
            kb[m] *= dt;
            stage[m] = e_half[m] * v[m] + 0.5 * kb[m];
        }
        rhs(stage, kc);
        for (std::size_t m = 0; m < n; ++m) {
            kc[m] *= dt;
            stage[m] = e_full[m] * v[m] + e_half[m] * kc[m];
        }
        rhs(stage, kd);
        for (std::size_t m = 0; m < n; ++m) {
            kd[m] *= dt;
            v[m] = e_full[m] * v[m] +
                   (e_full[m] * ka[m] + 2.0 * e_half[m] * (kb[m] + kc[m]) + kd[m]) / 6.0;
        }
    }
};

Solver::Solver(const SimGrid& grid) : grid_(grid) {
    grid_.validate();
    impl_ = std::make_unique<Impl>(grid_);
}

Solver::~Solver() = default;

std::vector<Complex> Solver::to_spectral(const std::vector<Complex>& u) {
    if (u.size() != grid_.n_modes) throw DomainError("field length does not match the grid");
    std::vector<Complex> out(u.size());
    impl_->fft(u, out);
    return out;
}

std::vector<Complex> Solver::to_physical(const std::vector<Complex>& u_hat) {
    if (u_hat.size() != grid_.n_modes) throw DomainError("field length does not match the grid");
    std::vector<Complex> out(u_hat.size());
    impl_->ifft(u_hat, out);
    return out;
}

std::vector<Complex> Solver::nonlinear_term(const std::vector<Complex>& u) {
    std::vector<Complex> v = to_spectral(u);
    std::vector<Complex> out(v.size());
    impl_->rhs(v, out);
    return to_physical(out);
}

void Solver::advance(FieldState& state, double dt, std::size_t n) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("step: dt must be positive");
    std::vector<Complex> v = to_spectral(state.u);
    for (std::size_t i = 0; i < n; ++i) impl_->rk4(v, dt);
    state.u = to_physical(v);
    state.t += dt * static_cast<double>(n);
    if (!all_finite(state.u)) {
        throw BlowUpError(fmt::format("non-finite field at t = {}", state.t));
    }
}

FieldState Solver::step(const FieldState& state, double dt) {
    FieldState out = state;
    advance(out, dt, 1);
    return out;
}

std::vector<Complex> nonlinear_term(const std::vector<Complex>& u, const SimGrid& grid) {
    Solver s(grid);
    return s.nonlinear_term(u);
}

FieldState step(const FieldState& state, double dt, const SimGrid& grid) {
    Solver s(grid);
    return s.step(state, dt);
}

std::vector<Complex> linear_evolution(const std::vector<Complex>& u0, const SimGrid& grid, double t) {
    Solver s(grid);
    std::vector<Complex> v = s.to_spectral(u0);
    const auto kappa = grid.wavenumbers();
    for (std::size_t m = 0; m < v.size(); ++m) {
        v[m] *= std::polar(1.0, -kappa[m] * kappa[m] * kappa[m] * t);
    }
    return s.to_physical(v);
}

FieldState sample_initial(const scattering::InitialProfile& profile, const SimGrid& grid) {
    grid.validate();
    std::vector<double> xs(grid.n_modes);
    for (std::size_t j = 0; j < grid.n_modes; ++j) xs[j] = grid.x(j);
    if (profile.x_min < -grid.half_width || profile.x_max > grid.half_width) {
        throw DomainError("profile support does not fit inside the periodic box");
    }
    return {0.0, profile.resample(xs)};
}

namespace {

void check_state(const FieldState& s, const SimGrid& grid, double mass0, const SimOptions& opts) {
    const double m = mass(s.u, grid);
    const double allowed = opts.mass_rate_tol * std::max(s.t, 1.0) * mass0;
    if (std::abs(m - mass0) > allowed) {
        throw MassDriftError(fmt::format("mass drift {:.3e} at t = {} exceeds {:.3e}",
                                         std::abs(m - mass0), s.t, allowed));
    }
    if (opts.check_contamination) {
        const std::size_t band = std::max<std::size_t>(
            1, static_cast<std::size_t>(opts.edge_fraction * static_cast<double>(grid.n_modes)));
        double edge = 0.0;
        for (std::size_t j = 0; j < band; ++j) {
            edge = std::max(edge, std::abs(s.u[j]));
            edge = std::max(edge, std::abs(s.u[grid.n_modes - 1 - j]));
        }
        if (edge > opts.contamination_tol) {
            throw ContaminationError(fmt::format(
                "|u| = {:.3e} in the edge bands at t = {} (threshold {:.1e})", edge, s.t,
                opts.contamination_tol));
        }
    }
}

}  // namespace

std::vector<FieldState> simulate(const FieldState& initial, const SimGrid& grid, double dt,
                                 double t_end, const std::vector<double>& snapshot_times,
                                 const SimOptions& opts) {
    grid.validate();
    if (initial.u.size() != grid.n_modes) throw DomainError("initial state does not match the grid");
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw DomainError("simulate: need dt > 0, t_end >= 0");
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        const double ts = snapshot_times[i];
        if (ts < initial.t || ts > t_end || (i > 0 && !(ts > snapshot_times[i - 1]))) {
            throw DomainError("snapshot times must be increasing and inside [t0, t_end]");
        }
    }
    Solver solver(grid);
    const double mass0 = mass(initial.u, grid);
    FieldState state = initial;
    check_state(state, grid, mass0, opts);
    std::vector<FieldState> out;
    auto run_to = [&](double target) {
        const double span = target - state.t;
        if (span <= 0.0) return;
        const auto n = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
        const double h = span / static_cast<double>(n);
        const double t0 = state.t;
        solver.advance(state, h, n);
        state.t = t0 + span;
        check_state(state, grid, mass0, opts);
    };
    for (double ts : snapshot_times) {
        run_to(ts);
        out.push_back(state);
    }
    run_to(t_end);
    return out;
}

std::vector<FieldState> simulate(const scattering::InitialProfile& profile, const SimGrid& grid,
                                 double dt, double t_end, const std::vector<double>& snapshot_times,
                                 const SimOptions& opts) {
    return simulate(sample_initial(profile, grid), grid, dt, t_end, snapshot_times, opts);
}

namespace {

std::vector<Complex> interpolate_many(const FieldState& state, const SimGrid& grid,
                                      const std::vector<double>& xs) {
    Solver solver(grid);
    const std::vector<Complex> v = solver.to_spectral(state.u);
    const auto kappa = grid.wavenumbers();
    const std::size_t n = grid.n_modes;
    std::vector<Complex> out;
    out.reserve(xs.size());
    for (double x : xs) {
        const double s = x + grid.half_width;
        Complex sum = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            if (m == n / 2) {
                sum += v[m] * std::cos(kappa[m] * s);
            } else {
                sum += v[m] * std::polar(1.0, kappa[m] * s);
            }
        }
        out.push_back(sum / static_cast<double>(n));
    }
    return out;
}

}  // namespace

Complex interpolate(const FieldState& state, const SimGrid& grid, double x) {
    return interpolate_many(state, grid, {x}).front();
}

Comparison compare_asymptotic(const std::vector<FieldState>& snapshots, const SimGrid& grid,
                              const ContextBuilder& ctx_builder, const std::vector<double>& zetas,
                              double M) {
    if (snapshots.size() < 3) throw DomainError("compare_asymptotic: need at least 3 snapshots");
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
        if (!(snapshots[i].t > snapshots[i - 1].t)) {
            throw DomainError("compare_asymptotic: snapshot times must be distinct and increasing");
        }
    }
    if (!(snapshots.front().t > 0.0)) throw DomainError("compare_asymptotic: snapshot times must be positive");
    if (zetas.empty()) throw DomainError("compare_asymptotic: empty zeta list");
    for (double z : zetas) {
        if (!(z > 0.0 && z <= M)) throw DomainError(fmt::format("zeta = {} outside (0, {}]", z, M));
    }

    Comparison out;
    std::vector<std::vector<double>> errs(zetas.size());
    for (const auto& snap : snapshots) {
        std::vector<double> xs;
        for (double z : zetas) {
            const double x = z * snap.t;
            if (std::abs(x) >= grid.half_width) {
                throw DomainError(fmt::format("x = {} at t = {} lies outside the box", x, snap.t));
            }
            xs.push_back(x);
        }
        const auto u_num = interpolate_many(snap, grid, xs);
        for (std::size_t i = 0; i < zetas.size(); ++i) {
            const auto ctx = ctx_builder(zetas[i], snap.t);
            const auto lo = asymptotics::u_leading(ctx, ctx.rho_plus);
            const double e = std::abs(u_num[i] - lo.u_as_over_sqrt_t);
            out.rows.push_back({snap.t, zetas[i], xs[i], u_num[i], lo.u_as_over_sqrt_t, e});
            errs[i].push_back(e);
        }
    }
    for (std::size_t i = 0; i < zetas.size(); ++i) {
        ExponentFit fit{zetas[i], std::nullopt};
        const bool any_zero = std::any_of(errs[i].begin(), errs[i].end(), [](double e) { return !(e > 0.0); });
        if (!any_zero) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(snapshots.size());
            for (std::size_t j = 0; j < snapshots.size(); ++j) {
                const double lx = std::log(snapshots[j].t);
                const double ly = std::log(errs[i][j]);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
            }
            fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        }
        out.fits.push_back(fit);
    }
    return out;
}

}  // namespace sasatk::pde
