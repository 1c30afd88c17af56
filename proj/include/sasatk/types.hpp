#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace sasatk {

using Complex = std::complex<double>;

// 1x2 row vector, the shape of the reflection coefficient rho(k).
using Row2 = Eigen::Matrix<Complex, 1, 2>;
using Mat3 = Eigen::Matrix3cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// (a, b) -> (conj b, conj a): the reflection symmetry rho(-k) = conj(rho(k)) swapped.
inline Row2 swap_conj(const Row2& r) {
    Row2 out;
    out << std::conj(r(1)), std::conj(r(0));
    return out;
}

// rho * rho^dagger for a row vector.
inline double norm_sq(const Row2& r) {
    return std::norm(r(0)) + std::norm(r(1));
}

// The (1 <-> 2) row/column permutation of the 3x3 symmetry relation.
inline Mat3 perm12() {
    Mat3 g = Mat3::Zero();
    g(0, 1) = 1.0;
    g(1, 0) = 1.0;
    g(2, 2) = 1.0;
    return g;
}

}  // namespace sasatk
