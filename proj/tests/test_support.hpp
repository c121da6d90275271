#ifndef TWOARC_TEST_SUPPORT_HPP
#define TWOARC_TEST_SUPPORT_HPP

#include <random>

#include "twoarc/elliptic.hpp"
#include "twoarc/tuple_geometry.hpp"

namespace twoarc::testing {

// Deterministic sampling helpers shared by the suites. All draws funnel
// through one engine so a single seed pins the whole run.
struct Sampler {
    std::mt19937_64 rng;

    explicit Sampler(std::uint64_t seed) : rng(seed) {}

    Real uniform(Real lo, Real hi) {
        std::uniform_real_distribution<Real> d(lo, hi);
        return d(rng);
    }

    // interior of the branch domain, away from the k=1 puncture
    Complex modulus_k() {
        const Real r = uniform(0.08, 0.97);
        const Real th = uniform(-1.48, 1.48);  // |arg k| < 85 degrees
        return std::polar(r, th);
    }

    // point of the half parallelogram, margin away from the corners/edges
    std::pair<Real, Real> lattice_point(Real margin = 0.04) {
        const Real lambda = uniform(margin, 1.0 - margin);
        Real lp = uniform(-1.0 + margin, 1.0 - margin);
        if (std::abs(lp) < margin) lp = lp < 0 ? -margin : margin;
        return {lambda, lp};
    }

    Complex disk_point(Real radius = 1.0) {
        while (true) {
            const Complex z(uniform(-radius, radius), uniform(-radius, radius));
            if (std::abs(z) <= radius) return z;
        }
    }

    // four well-separated points in the unit disk
    EndpointTuple random_tuple(Real min_sep = 0.3) {
        while (true) {
            const EndpointTuple t{disk_point(), disk_point(), disk_point(),
                                  disk_point(), false};
            const auto pts = t.points();
            Real sep = 1e300;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    sep = std::min(sep,
                                   std::abs(pts[static_cast<std::size_t>(i)] -
                                            pts[static_cast<std::size_t>(j)]));
            if (sep >= min_sep) return t;
        }
    }
};

}  // namespace twoarc::testing

#endif
