#include "twoarc/roots.hpp"

#include <algorithm>
#include <cmath>

#include "twoarc/errors.hpp"
#include "twoarc/poly.hpp"

namespace twoarc {

namespace {

std::vector<Complex> companion_roots(const ComplexVector& c) {
    const Eigen::Index n = c.size() - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -c(i) / c(n);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
    if (solver.info() != Eigen::Success)
        throw numeric_error("companion eigenvalue solve failed", 0.0);
    std::vector<Complex> roots(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] =
        solver.eigenvalues()(i);
    return roots;
}

}  // namespace

std::vector<Complex> poly_roots(const ComplexVector& coeffs,
                                const std::vector<Complex>& warm) {
    Eigen::Index deg = coeffs.size() - 1;
    while (deg > 0 && coeffs(deg) == Complex(0.0)) --deg;
    if (deg < 1) throw shape_error("root finding needs degree >= 1");
    const ComplexVector c = coeffs.head(deg + 1);
    const std::size_t n = static_cast<std::size_t>(deg);

    std::vector<Complex> z;
    if (warm.size() == n) {
        z = warm;
    } else {
        // Fujiwara-style radius, staggered angles
        Real r = 0.0;
        for (Eigen::Index i = 0; i < deg; ++i) {
            const Real q = std::pow(std::abs(c(i) / c(deg)),
                                    1.0 / static_cast<Real>(deg - i));
            r = std::max(r, q);
        }
        r = 2.0 * std::max(r, 0.5);
        z.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Real ang = 2.0 * pi * static_cast<Real>(i) /
                                 static_cast<Real>(n) + 0.37;
            z[i] = r * Complex(std::cos(ang), std::sin(ang));
        }
    }

    bool converged = false;
    for (int it = 0; it < 90 && !converged; ++it) {
        Real worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto [p, dp] = eval_poly_deriv(c, z[i]);
            if (p == Complex(0.0)) continue;
            Complex w;
            if (dp == Complex(0.0)) {
                w = Complex(1e-8, 1e-8);  // nudge off the critical point
            } else {
                w = p / dp;
            }
            Complex s(0.0);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const Complex d = z[i] - z[j];
                if (d == Complex(0.0)) continue;
                s += Complex(1.0) / d;
            }
            const Complex denom = Complex(1.0) - w * s;
            const Complex corr = denom == Complex(0.0) ? w : w / denom;
            z[i] -= corr;
            worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(z[i])));
        }
        converged = worst <= 1e-14;
    }

    if (!converged) {
        z = companion_roots(c);
        // polish multiple-root clusters only mildly; Newton diverges there
        for (Complex& zi : z) {
            for (int s = 0; s < 3; ++s) {
                const auto [p, dp] = eval_poly_deriv(c, zi);
                if (std::abs(dp) < 1e-280) break;
                const Complex step = p / dp;
                if (!is_finite(step) || std::abs(step) > 1.0) break;
                zi -= step;
            }
        }
    }
    return z;
}

std::vector<std::pair<Complex, int>> cluster_points(
    const std::vector<Complex>& pts, Real tol) {
    std::vector<std::pair<Complex, int>> clusters;
    std::vector<bool> used(pts.size(), false);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (used[i]) continue;
        Complex sum = pts[i];
        int count = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(pts[j] - sum / static_cast<Real>(count)) <= tol) {
                sum += pts[j];
                ++count;
                used[j] = true;
            }
        }
        clusters.emplace_back(sum / static_cast<Real>(count), count);
    }
    return clusters;
}

}  // namespace twoarc
