#ifndef TWOARC_TUPLE_GEOMETRY_HPP
#define TWOARC_TUPLE_GEOMETRY_HPP

#include <array>

#include "twoarc/elliptic.hpp"
#include "twoarc/types.hpp"

namespace twoarc {

/// Four pairwise-distinct arc endpoints. `canonical` records that the
/// ordering satisfies |a4-a1||a3-a2| <= |a4-a2||a3-a1| with k^2 off the
/// negative real axis.
struct EndpointTuple {
    Complex a1, a2, a3, a4;
    bool canonical = false;

    std::array<Complex, 4> points() const { return {a1, a2, a3, a4}; }
    Complex point(int i) const { return points()[static_cast<std::size_t>(i)]; }
};

/// Canonical reordering plus the permutation that produced it:
/// tuple.point(i) == original.point(perm[i]).
struct CanonicalResult {
    EndpointTuple tuple;
    std::array<int, 4> perm;
};

/// Witness that (lambda, lambda') sits on the rational lattice of
/// denominator n, up to the recorded residuals.
struct TupleCertificate {
    int n = 0;
    long m = 0;
    long m_prime = 0;
    Real lambda_residual = 0.0;
    Real lambda_prime_residual = 0.0;
    bool accepted = false;
};

void validate_distinct(const EndpointTuple& t, Real separation_floor = 1e-12);

/// Reorders the endpoints so the modulus lands in its branch domain.
/// Identity when the input already qualifies; otherwise the first admissible
/// permutation in lexicographic index order.
CanonicalResult canonical_order(const EndpointTuple& t,
                                Real separation_floor = 1e-12);

/// Modulus from the endpoint cross ratio,
///   k^2 = (a4-a1)(a3-a2) / ((a4-a2)(a3-a1)),
/// square-root branch with Re(k) > 0, cross-checked against the
/// complementary identity k'^2 = (a4-a3)(a2-a1) / ((a4-a2)(a3-a1)).
Modulus modulus_from_tuple(const EndpointTuple& t);

/// The unique rho in the half parallelogram with
/// sn^2(rho) = (a4-a2)/(a4-a1).
LatticeCoord rho_from_tuple(const EndpointTuple& t, const Modulus& m);

/// Decides whether the endpoints bound a degree-n two-arc inverse image:
/// true exactly when both lattice coordinates are rationals m/n, m'/n
/// within tol. A certificate is returned either way.
TupleCertificate is_tn_tuple(const EndpointTuple& t, int n, Real tol = 1e-9);

}  // namespace twoarc

#endif
