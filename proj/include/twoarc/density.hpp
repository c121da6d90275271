#ifndef TWOARC_DENSITY_HPP
#define TWOARC_DENSITY_HPP

#include <utility>

#include "twoarc/tuple_geometry.hpp"

namespace twoarc {

/// Coefficients of the Moebius map carrying a2 to a3 at fixed modulus:
///   a3 = A1 (a2 + A2) / (a2 + A3),
///   A1 = (a4 - k'^2 a1)/k^2,  A2 = k^2 a1 a4/(k'^2 a1 - a4),
///   A3 = (k'^2 a4 - a1)/k^2.
struct MoebiusParams {
    Complex A1, A2, A3;
};

MoebiusParams moebius_params(const EndpointTuple& t, const Modulus& m);

/// Certified constants of the O(1/n) approximation:
///   |a2 - a2~| <= C1/n and |a3 - a3~| <= C2/n for all n >= N.
/// s*, c*, d* are maxima of |sn|, |cn|, |dn| over the exclusion box and
/// s** the minimum of |sn^2 - 1/k^2| there; B_observed is the sn-difference
/// amplification actually measured at n = N.
struct ErrorBoundReport {
    Real C1 = 0.0;
    Real C2 = 0.0;
    Real n1 = 0.0;
    int n2 = 0;
    Real n3 = 0.0;
    int N = 0;
    Real s_star = 0.0;
    Real c_star = 0.0;
    Real d_star = 0.0;
    Real s_star_star = 0.0;
    Real B_observed = 0.0;
};

struct BoundsOptions {
    int grid = 128;         // base sampling grid per axis
    int refine_levels = 3;  // local refinement passes around each extremum
    Real safety = 1.05;     // multiplicative margin on the sampled extrema
};

/// Nearest admissible lattice numerators: |m/n - lambda| <= 1/n and
/// |m'/n - lambda'| <= 1/n, avoiding integer lattice hits of rho +- rho~
/// and corner-equivalent rho~. Ties round half away from zero.
std::pair<long, long> nearest_lattice(Real lambda, Real lambda_prime, int n,
                                      const Modulus& m);

/// Snap of a quadruple onto the nearest degree-n two-arc endpoint tuple,
/// keeping a1 and a4 fixed.
struct ApproxResult {
    Complex a2_tilde;
    Complex a3_tilde;
    TupleCertificate cert;   // certificate of the returned tuple
    EndpointTuple tuple;     // (a1, a2~, a3~, a4)
    long m = 0;              // chosen lattice numerators
    long m_prime = 0;
    bool exact_hit = false;  // input was already on the lattice
};

ApproxResult approximate_tuple(const EndpointTuple& t, int n,
                               Real cert_tol = 1e-9);

ErrorBoundReport error_bounds(const EndpointTuple& t,
                              const BoundsOptions& opt = {});

}  // namespace twoarc

#endif
