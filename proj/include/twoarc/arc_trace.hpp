#ifndef TWOARC_ARC_TRACE_HPP
#define TWOARC_ARC_TRACE_HPP

#include <string>
#include <vector>

#include "twoarc/pell.hpp"

namespace twoarc {

/// Point sets of T_n^{-1}([-1,1]) sampled at Chebyshev-spaced levels,
/// threaded into branches.
struct PreimageTrace {
    struct LevelSet {
        Real t;
        std::vector<Complex> roots;
    };
    std::vector<LevelSet> points;
    int component_count = 0;
    std::vector<Complex> endpoint_estimates;
    std::vector<std::vector<Complex>> gamma;  // one ordered polyline per branch
    std::vector<int> flagged;                 // level indices near a critical value
};

/// Solves T_n(z) = cos(pi j/samples) for j = 0..samples with continuation
/// between levels, then threads roots into branches and counts connected
/// components of the epsilon-graph.
PreimageTrace trace_preimage(const PolynomialPair& pair, int samples);

/// The four odd-multiplicity zeros of T^2 - 1: roots pairing with roots of U
/// (within match_tol) are removed as even-multiplicity doubles. A count
/// other than four raises not_two_arc_error.
std::vector<Complex> endpoints_from_pair(const PolynomialPair& pair,
                                         Real match_tol = 1e-6);

struct not_two_arc_error : domain_error {
    not_two_arc_error(const std::string& what, int odd_zeros)
        : domain_error(what), odd_zeros(odd_zeros) {}
    int odd_zeros;
};

/// CSV rows `t, re(z), im(z), branch_id`; byte-deterministic.
std::string trace_to_csv(const PreimageTrace& trace);

/// SVG with one polyline per branch and endpoint markers; byte-deterministic.
std::string trace_to_svg(const PreimageTrace& trace);

}  // namespace twoarc

#endif
