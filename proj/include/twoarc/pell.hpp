#ifndef TWOARC_PELL_HPP
#define TWOARC_PELL_HPP

#include "twoarc/poly.hpp"
#include "twoarc/tuple_geometry.hpp"

namespace twoarc {

/// Polynomial pair (T_n, U_{n-2}) with shared leading coefficient tau and
/// T_n^2 - 1 = H_4 U_{n-2}^2 for the quartic H_4 vanishing at the endpoints.
struct PolynomialPair {
    ComplexVector t_coeffs;  // length n+1, ascending
    ComplexVector u_coeffs;  // length n-1, ascending
    Complex tau;
    Real pell_residual = 0.0;

    int degree() const { return static_cast<int>(t_coeffs.size()) - 1; }
};

/// Scaled max-norm of the defect T^2 - 1 - H_4 U^2 in coefficient space,
/// divided by |tau|^2. Exact convolution arithmetic; zero for exact pairs.
Real pell_residual(const PolynomialPair& pair, const EndpointTuple& t);

/// Builds the pair for a certified tuple (cert.accepted, 2 <= n <= 32).
/// Asymptotic-series least squares seeds a Gauss-Newton polish on the
/// coefficient system; a modulus-path homotopy is the fallback. The sign is
/// normalized so T_n(a4) = +1.
PolynomialPair construct_pair(const EndpointTuple& t,
                              const TupleCertificate& cert,
                              Real accept_tol = 1e-8);

}  // namespace twoarc

#endif
