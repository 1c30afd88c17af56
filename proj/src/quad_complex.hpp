#pragma once

// Minimal binary128 complex arithmetic for the parabolic-cylinder Maclaurin
// branch. Only what that branch needs.

#include <quadmath.h>

#include <complex>

namespace sasatk::detail {

using quad = __float128;

struct QComplex {
    quad re = 0;
    quad im = 0;

    QComplex() = default;
    QComplex(quad r, quad i = 0) : re(r), im(i) {}
    explicit QComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> to_double() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    QComplex& operator+=(const QComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    QComplex& operator-=(const QComplex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    QComplex& operator*=(const QComplex& o) {
        const quad r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    QComplex& operator/=(const QComplex& o) {
        // Smith's algorithm.
        if (fabsq(o.re) >= fabsq(o.im)) {
            const quad q = o.im / o.re;
            const quad d = o.re + o.im * q;
            const quad r = (re + im * q) / d;
            im = (im - re * q) / d;
            re = r;
        } else {
            const quad q = o.re / o.im;
            const quad d = o.re * q + o.im;
            const quad r = (re * q + im) / d;
            im = (im * q - re) / d;
            re = r;
        }
        return *this;
    }
};

inline QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
inline QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
inline QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
inline QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
inline QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }

inline quad qabs(const QComplex& z) { return hypotq(z.re, z.im); }

inline QComplex qexp(const QComplex& z) {
    const quad m = expq(z.re);
    return {m * cosq(z.im), m * sinq(z.im)};
}

inline QComplex qlog(const QComplex& z) { return {logq(qabs(z)), atan2q(z.im, z.re)}; }

inline QComplex qsin(const QComplex& z) {
    return {sinq(z.re) * coshq(z.im), cosq(z.re) * sinhq(z.im)};
}

inline const quad kQuadPi = acosq(quad(-1));
inline const quad kQuadEps = ldexpq(quad(1), -112);

}  // namespace sasatk::detail
