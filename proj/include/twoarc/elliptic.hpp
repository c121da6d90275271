#ifndef TWOARC_ELLIPTIC_HPP
#define TWOARC_ELLIPTIC_HPP

#include <utility>

#include "twoarc/errors.hpp"
#include "twoarc/types.hpp"

namespace twoarc {

/// Elliptic modulus data for k in the branch domain
///   D_k = { u : |u| <= 1, Re(u) > 0, u != 1 },
/// on which K and K' are single valued. kprime is the principal square
/// root of 1 - k^2 (Re >= 0) and nome = exp(-pi K'/K), |nome| < 1.
struct Modulus {
    Complex k;
    Complex kprime;
    Complex K;
    Complex Kprime;
    Complex nome;

    // zero-argument theta values, cached at construction
    Complex theta2z;  // sum q^{j(j+1)}           (2 q^{1/4} prefactor dropped)
    Complex theta3z;  // 1 + 2 sum q^{j^2}
    Complex theta4z;  // 1 + 2 sum (-1)^j q^{j^2}

    Complex k2() const { return k * k; }
    Complex inv_k2() const { return Complex(1.0) / (k * k); }
};

/// Position of u in the (K, iK') frame: u = lambda K + i lambda' K'.
struct LatticeCoord {
    Complex rho;
    Real lambda;
    Real lambda_prime;
};

bool in_modulus_domain(Complex k, Real slack = 1e-12);

/// Complete elliptic integrals by the arithmetic-geometric mean with the
/// square-root branch minimizing |a_n - b_n| at every step.
Modulus complete_integrals(Complex k);

struct JacobiValues {
    Complex sn, cn, dn;
};

/// sn/cn/dn at complex argument via theta quotients with argument reduction
/// modulo the period lattice {2K, 2iK'}. Throws pole_error when u is within
/// 1e-8 * min(|K|,|K'|) of the pole lattice iK' + 2ZK + 2iZK'.
JacobiValues jacobi_fns(Complex u, const Modulus& m);

/// Distance from u to the nearest pole of sn/cn/dn.
Real pole_distance(Complex u, const Modulus& m);

/// Real coordinates (lambda, lambda') with u = lambda K + i lambda' K'.
/// No folding is performed.
std::pair<Real, Real> lattice_coords(Complex u, const Modulus& m);

/// Membership in the half-period parallelogram
///   P = { mu K + i mu' K' : 0 <= mu, mu' <= 1  or  0 < mu < 1, -1 < mu' < 0 },
/// on which sn^2 is a bijection onto the Riemann sphere.
bool in_half_parallelogram(Real lambda, Real lambda_prime);

/// The unique rho in P with sn^2(rho) = w. Accepts w = infinity (encoded via
/// infinite components). Round trip satisfies |sn^2(rho) - w| <= tol*(1+|w|).
LatticeCoord inverse_sn2(Complex w, const Modulus& m, Real tol = 1e-8);

/// Carlson symmetric integral R_F for complex arguments off the negative
/// real axis.
Complex carlson_rf(Complex x, Complex y, Complex z);

}  // namespace twoarc

#endif
