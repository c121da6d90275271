#ifndef TWOARC_ROOTS_HPP
#define TWOARC_ROOTS_HPP

#include <vector>

#include "twoarc/types.hpp"

namespace twoarc {

/// All roots of the polynomial (ascending coefficients, degree >= 1) by
/// simultaneous Aberth-Ehrlich iteration, falling back to companion-matrix
/// eigenvalues on stagnation. `warm` seeds the iteration when it matches the
/// degree (useful for continuation along a parameter).
std::vector<Complex> poly_roots(const ComplexVector& coeffs,
                                const std::vector<Complex>& warm = {});

/// Groups points into clusters of radius tol; returns (centroid, count).
std::vector<std::pair<Complex, int>> cluster_points(
    const std::vector<Complex>& pts, Real tol);

}  // namespace twoarc

#endif
