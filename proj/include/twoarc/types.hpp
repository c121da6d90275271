#ifndef TWOARC_TYPES_HPP
#define TWOARC_TYPES_HPP

#include <complex>
#include <Eigen/Dense>

namespace twoarc {

using Real = double;
using Complex = std::complex<double>;

/// Polynomial coefficients in ascending degree order.
using ComplexVector = Eigen::VectorXcd;

inline constexpr Real pi = 3.14159265358979323846;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Point at infinity on the Riemann sphere, encoded with infinite components.
inline Complex complex_infinity() {
    return {std::numeric_limits<Real>::infinity(), 0.0};
}

inline bool is_infinity(Complex z) {
    return std::isinf(z.real()) || std::isinf(z.imag());
}

}  // namespace twoarc

#endif
