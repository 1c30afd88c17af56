#include "sasatk/specfun.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "quad_complex.hpp"
#include "sasatk/errors.hpp"

namespace sasatk::specfun {

namespace {

using detail::kQuadEps;
using detail::kQuadPi;
using detail::QComplex;
using detail::quad;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
constexpr double kLanczosG = 7.0;

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

bool near_pole(Complex z) {
    if (z.real() > 0.5) return false;
    const double n = std::round(z.real());
    return std::abs(z - Complex(n, 0.0)) <= 1e-14 * std::max(1.0, std::abs(z));
}

// Gamma for Re z >= 1/2.
Complex lanczos_gamma(Complex z) {
    z -= 1.0;
    Complex x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        x += kLanczos[i] / (z + static_cast<double>(i));
    }
    const Complex t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

// ---- binary128 Gamma via shifted Stirling series ---------------------------

// B_{2k} / (2k (2k-1)), k = 1..15
const std::array<quad, 15>& stirling_coefficients() {
    static const std::array<quad, 15> c = [] {
        const std::array<std::pair<quad, quad>, 15> bern = {{
            {1, 6},
            {-1, 30},
            {1, 42},
            {-1, 30},
            {5, 66},
            {-691, 2730},
            {7, 6},
            {-3617, 510},
            {43867, 798},
            {-174611, 330},
            {854513, 138},
            {-236364091, 2730},
            {8553103, 6},
            {-quad(23749461029.0), 870},
            {quad(8615841276005.0), 14322},
        }};
        std::array<quad, 15> out{};
        for (int k = 1; k <= 15; ++k) {
            const quad b = bern[k - 1].first / bern[k - 1].second;
            out[k - 1] = b / (quad(2 * k) * quad(2 * k - 1));
        }
        return out;
    }();
    return c;
}

// Gamma(w) for Re w >= 1/2.
QComplex quad_gamma_right(QComplex w) {
    QComplex prod(1);
    while (w.re < 20) {
        prod *= w;
        w += QComplex(1);
    }
    const QComplex inv = QComplex(1) / w;
    const QComplex inv2 = inv * inv;
    QComplex series(0);
    QComplex pw = inv;
    for (const quad c : stirling_coefficients()) {
        series += QComplex(c) * pw;
        pw *= inv2;
    }
    const quad half_log_2pi = quad(0.5) * logq(2 * kQuadPi);
    const QComplex lg =
        (w - QComplex(quad(0.5))) * detail::qlog(w) - w + QComplex(half_log_2pi) + series;
    return detail::qexp(lg) / prod;
}

QComplex quad_rgamma(QComplex w) {
    const quad n = roundq(w.re);
    if (w.im == 0 && w.re <= 0 && w.re == n) return QComplex(0);
    if (w.re >= quad(0.5)) return QComplex(1) / quad_gamma_right(w);
    const QComplex s = detail::qsin(QComplex(kQuadPi) * w);
    return s * quad_gamma_right(QComplex(1) - w) / QComplex(kQuadPi);
}

// ---- Maclaurin branch ------------------------------------------------------

struct KummerSum {
    QComplex value;
    QComplex derivative;  // d/dx M(alpha, beta, x)
    quad max_term = 0;
};

KummerSum kummer_m(const QComplex& alpha, const QComplex& beta, const QComplex& x) {
    KummerSum out;
    QComplex term(1);
    QComplex dterm = alpha / beta;  // coefficient of x^0 in M'
    out.value = term;
    out.derivative = dterm;
    out.max_term = 1;
    const quad xabs = detail::qabs(x);
    for (int n = 0; n < 4000; ++n) {
        const QComplex qn(n);
        term *= (alpha + qn) / (beta + qn) * x / QComplex(n + 1);
        // d/dx of x^{n+1}/(n+1)! (alpha)_{n+1}/(beta)_{n+1}
        dterm *= (alpha + QComplex(n + 1)) / (beta + QComplex(n + 1)) * x / QComplex(n + 1);
        out.value += term;
        out.derivative += dterm;
        const quad ta = detail::qabs(term);
        const quad da = detail::qabs(dterm);
        if (ta > out.max_term) out.max_term = ta;
        if (da > out.max_term) out.max_term = da;
        if (n > xabs && ta <= kQuadEps * quad(1e-3) * detail::qabs(out.value) &&
            da <= kQuadEps * quad(1e-3) * (detail::qabs(out.derivative) + quad(1e-300))) {
            return out;
        }
        if (ta == 0 && da == 0) return out;
    }
    throw AccuracyLossError("Kummer series failed to converge");
}

std::string describe(Complex a, Complex z) {
    std::ostringstream os;
    os.precision(17);
    os << "a=" << a << " z=" << z;
    return os.str();
}

void check_finite(Complex a, Complex z) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(z.real()) ||
        !std::isfinite(z.imag())) {
        throw DomainError("pcf_d: non-finite argument");
    }
}

}  // namespace

void AccuracyBudget::validate() const {
    if (!(abs_tol >= 0.0 && rel_tol >= 0.0 && (abs_tol > 0.0 || rel_tol > 0.0))) {
        throw DomainError("AccuracyBudget: need abs_tol > 0 or rel_tol > 0");
    }
}

Complex gamma_complex(Complex z) {
    if (near_pole(z)) {
        std::ostringstream os;
        os << "gamma_complex: pole at z=" << z;
        throw PoleError(os.str());
    }
    if (z.real() >= 0.5) return lanczos_gamma(z);
    return kPi / (std::sin(kPi * z) * lanczos_gamma(1.0 - z));
}

Complex rgamma_complex(Complex z) {
    if (is_nonpositive_integer(z)) return 0.0;
    if (z.real() >= 0.5) return 1.0 / lanczos_gamma(z);
    return std::sin(kPi * z) * lanczos_gamma(1.0 - z) / kPi;
}

PcfValue pcf_d_series(Complex a_d, Complex z_d, const AccuracyBudget& budget) {
    check_finite(a_d, z_d);
    budget.validate();
    const QComplex a(a_d);
    const QComplex z(z_d);
    const QComplex half(quad(0.5));
    const QComplex sqrt_pi(sqrtq(kQuadPi));
    const QComplex ln2(logq(quad(2.0)));

    const QComplex coef_even =
        sqrt_pi * detail::qexp(a * half * ln2) * quad_rgamma((QComplex(1) - a) * half);
    const QComplex coef_odd = -sqrt_pi * detail::qexp((a + QComplex(1)) * half * ln2) *
                              quad_rgamma(-a * half);

    const QComplex z2 = z * z;
    const QComplex x = z2 * half;
    const KummerSum even = kummer_m(-a * half, half, x);
    const KummerSum odd = kummer_m((QComplex(1) - a) * half, QComplex(quad(1.5)), x);

    const QComplex gauss = detail::qexp(-z2 / QComplex(4));
    const QComplex inner = coef_even * even.value + coef_odd * z * odd.value;
    const QComplex value = gauss * inner;
    const QComplex dinner =
        coef_even * even.derivative * z + coef_odd * (odd.value + z2 * odd.derivative);
    const QComplex deriv = -z * half * value + gauss * dinner;

    // Worst-case rounding: largest partial term, scaled, times unit roundoff.
    const quad scale = detail::qabs(gauss) *
                       (detail::qabs(coef_even) * even.max_term +
                        detail::qabs(coef_odd) * (detail::qabs(z) + 1) * odd.max_term) *
                       (detail::qabs(z) + 1);
    const double loss = static_cast<double>(scale * kQuadEps * 64);
    const PcfValue out{value.to_double(), deriv.to_double()};
    if (loss > budget.allowed(std::abs(out.value))) {
        throw AccuracyLossError("pcf_d series: cancellation exceeds budget at " + describe(a_d, z_d));
    }
    return out;
}

namespace {

struct AsymptoticSum {
    Complex value;
    Complex derivative;  // d/dz of the sum (the z^{-2s} dependence)
    double tail;         // magnitude of the first omitted term
};

// sum_s sign^s (p)_{2s} / (s! (2 z^2)^s), truncated at the smallest term.
AsymptoticSum asymptotic_sum(Complex p, Complex z, double sign) {
    const Complex w = 1.0 / (2.0 * z * z);
    Complex term = 1.0;
    AsymptoticSum out{1.0, 0.0, 0.0};
    double last = 1.0;
    for (int s = 0; s < 400; ++s) {
        const Complex next =
            term * sign * (p + 2.0 * s) * (p + 2.0 * s + 1.0) / static_cast<double>(s + 1) * w;
        const double mag = std::abs(next);
        if (mag >= last && s > 0) {
            out.tail = mag;
            return out;
        }
        if (mag <= 1e-18 * std::abs(out.value)) {
            out.tail = mag;
            return out;
        }
        term = next;
        out.value += term;
        out.derivative += term * (-2.0 * (s + 1)) / z;
        last = mag;
    }
    out.tail = last;
    return out;
}

}  // namespace

PcfValue pcf_d_asymptotic(Complex a, Complex z, const AccuracyBudget& budget) {
    check_finite(a, z);
    budget.validate();
    if (z == 0.0) throw DomainError("pcf_d asymptotic branch needs z != 0");
    const Complex logz = std::log(z);
    const double argz = std::arg(z);

    // Recessive-form term: z^a e^{-z^2/4} S1.
    const AsymptoticSum s1 = asymptotic_sum(-a, z, -1.0);
    const Complex pref1 = std::exp(a * logz - z * z / 4.0);
    Complex value = pref1 * s1.value;
    Complex deriv = pref1 * ((a / z - z / 2.0) * s1.value + s1.derivative);
    double err = std::abs(pref1) * s1.tail;

    if (std::abs(argz) > kPi / 2.0) {
        const double side = argz > 0.0 ? 1.0 : -1.0;
        const Complex k = -std::sqrt(2.0 * kPi) * rgamma_complex(-a) * std::exp(side * kI * kPi * a);
        if (k != 0.0) {
            const AsymptoticSum s2 = asymptotic_sum(a + 1.0, z, 1.0);
            const Complex pref2 = k * std::exp(z * z / 4.0 - (a + 1.0) * logz);
            value += pref2 * s2.value;
            deriv += pref2 * ((z / 2.0 - (a + 1.0) / z) * s2.value + s2.derivative);
            err += std::abs(pref2) * s2.tail;
        }
    }
    if (!(err <= budget.allowed(std::abs(value)))) {
        throw AccuracyLossError("pcf_d asymptotic: truncation error exceeds budget at " +
                                describe(a, z));
    }
    return {value, deriv};
}

PcfValue pcf_d_with_derivative(Complex a, Complex z, const AccuracyBudget& budget) {
    if (std::abs(z) <= kSeriesRadius) return pcf_d_series(a, z, budget);
    return pcf_d_asymptotic(a, z, budget);
}

Complex pcf_d(Complex a, Complex z, const AccuracyBudget& budget) {
    return pcf_d_with_derivative(a, z, budget).value;
}

double weber_residual(Complex a, Complex z, double h, const AccuracyBudget& budget) {
    if (!(h > 0.0)) throw DomainError("weber_residual: step must be positive");
    const Complex g0 = pcf_d(a, z, budget);
    const Complex gp = pcf_d(a, z + h, budget);
    const Complex gm = pcf_d(a, z - h, budget);
    const Complex second = (gp - 2.0 * g0 + gm) / (h * h);
    return std::abs(second + (0.5 - z * z / 4.0 + a) * g0) / std::max(1.0, std::abs(g0));
}

IdentityResiduals pcf_identities_residual(Complex a, Complex z, const AccuracyBudget& budget) {
    const PcfValue d = pcf_d_with_derivative(a, z, budget);
    const Complex d_lower = pcf_d(a - 1.0, z, budget);
    const double recurrence = std::abs(d.derivative + z / 2.0 * d.value - a * d_lower);

    const Complex g = gamma_complex(a);
    const Complex up = std::exp(kI * kPi / 2.0 * (a - 1.0));
    const Complex down = std::exp(-kI * kPi / 2.0 * (a - 1.0));
    const Complex rhs = g / std::sqrt(2.0 * kPi) *
                        (up * pcf_d(-a, kI * z, budget) + down * pcf_d(-a, -kI * z, budget));
    return {recurrence, std::abs(d_lower - rhs)};
}

}  // namespace sasatk::specfun
