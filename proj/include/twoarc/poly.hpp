#ifndef TWOARC_POLY_HPP
#define TWOARC_POLY_HPP

#include <span>
#include <vector>

#include "twoarc/errors.hpp"
#include "twoarc/types.hpp"

namespace twoarc {

/// Product of two coefficient vectors (ascending degree).
ComplexVector poly_conv(const ComplexVector& a, const ComplexVector& b);

/// Monic polynomial with the given roots.
ComplexVector poly_from_roots(std::span<const Complex> roots);

ComplexVector poly_derivative(const ComplexVector& a);

/// Horner evaluation with compensated (double-double) accumulation, so the
/// result stays accurate even when the plain condition number
/// sum |c_j||z|^j / |p(z)| is large.
Complex eval_poly(const ComplexVector& coeffs, Complex z);

/// Plain Horner returning p(z) and p'(z).
std::pair<Complex, Complex> eval_poly_deriv(const ComplexVector& coeffs,
                                            Complex z);

/// Coefficients of the degree-n Chebyshev polynomials (first/second kind).
ComplexVector chebyshev_t(int n);
ComplexVector chebyshev_u(int n);

/// outer(inner(z)) in coefficient space.
ComplexVector poly_compose(const ComplexVector& outer,
                           const ComplexVector& inner);

/// p(alpha z + beta).
ComplexVector poly_linear_substitute(const ComplexVector& p, Complex alpha,
                                     Complex beta);

}  // namespace twoarc

#endif
