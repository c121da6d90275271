#include "twoarc/arc_trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

#include "twoarc/roots.hpp"

namespace twoarc {

namespace {

void validate_pair_shape(const PolynomialPair& pair) {
    const int n = pair.degree();
    if (n < 1) throw shape_error("pair degree must be positive");
    if (pair.u_coeffs.size() == 0) throw shape_error("empty U coefficients");
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(
                    parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
    }
};

// Greedy nearest-neighbor matching of the new root set against the previous
// one; returns the permutation new_order with new_order[b] = index into cur.
std::vector<int> match_roots(const std::vector<Complex>& prev,
                             const std::vector<Complex>& cur) {
    const int n = static_cast<int>(prev.size());
    std::vector<int> order(static_cast<std::size_t>(n), -1);
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    // all pairwise distances, assigned smallest first
    std::vector<std::tuple<Real, int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            pairs.emplace_back(
                std::abs(prev[static_cast<std::size_t>(i)] -
                         cur[static_cast<std::size_t>(j)]),
                i, j);
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) {
                  return std::get<0>(a) < std::get<0>(b);
              });
    int assigned = 0;
    for (const auto& [d, i, j] : pairs) {
        (void)d;
        if (order[static_cast<std::size_t>(i)] != -1 ||
            taken[static_cast<std::size_t>(j)])
            continue;
        order[static_cast<std::size_t>(i)] = j;
        taken[static_cast<std::size_t>(j)] = true;
        if (++assigned == n) break;
    }
    return order;
}

Real point_set_diameter(const std::vector<Complex>& pts) {
    Real d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, std::abs(pts[i] - pts[j]));
    return d;
}

int count_components(const std::vector<Complex>& pts, Real eps,
                     const std::vector<std::pair<int, int>>& extra_edges) {
    const int n = static_cast<int>(pts.size());
    if (n == 0) return 0;
    UnionFind uf(n);
    for (const auto& [a, b] : extra_edges) uf.unite(a, b);
    // spatial hash on cells of size eps
    std::unordered_map<long long, std::vector<int>> cells;
    auto key = [eps](Complex z) {
        const long long cx = static_cast<long long>(std::floor(z.real() / eps));
        const long long cy = static_cast<long long>(std::floor(z.imag() / eps));
        return (cx << 32) ^ (cy & 0xffffffffLL);
    };
    for (int i = 0; i < n; ++i)
        cells[key(pts[static_cast<std::size_t>(i)])].push_back(i);
    const Real eps2 = eps * eps;
    for (int i = 0; i < n; ++i) {
        const Complex z = pts[static_cast<std::size_t>(i)];
        const long long cx = static_cast<long long>(std::floor(z.real() / eps));
        const long long cy = static_cast<long long>(std::floor(z.imag() / eps));
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                const long long k = ((cx + dx) << 32) ^ ((cy + dy) & 0xffffffffLL);
                const auto it = cells.find(k);
                if (it == cells.end()) continue;
                for (int j : it->second)
                    if (j > i && std::norm(z - pts[static_cast<std::size_t>(j)]) <=
                                     eps2)
                        uf.unite(i, j);
            }
        }
    }
    int comps = 0;
    for (int i = 0; i < n; ++i)
        if (uf.find(i) == i) ++comps;
    return comps;
}

// Odd-multiplicity cluster centers of T^2 - 1 = 0.
std::vector<Complex> odd_zero_estimates(const PolynomialPair& pair) {
    ComplexVector T2 = poly_conv(pair.t_coeffs, pair.t_coeffs);
    T2(0) -= 1.0;
    const std::vector<Complex> roots = poly_roots(T2);
    Real scale = 1.0;
    for (const Complex& r : roots) scale = std::max(scale, std::abs(r));
    std::vector<Complex> odd;
    for (const auto& [center, count] : cluster_points(roots, 2e-5 * scale))
        if (count % 2 == 1) odd.push_back(center);
    return odd;
}

std::string format_real(Real v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

}  // namespace

std::vector<Complex> endpoints_from_pair(const PolynomialPair& pair,
                                         Real match_tol) {
    validate_pair_shape(pair);
    if (pair.degree() < 2) throw shape_error("pair degree must be >= 2");

    ComplexVector T2 = poly_conv(pair.t_coeffs, pair.t_coeffs);
    T2(0) -= 1.0;
    std::vector<Complex> roots = poly_roots(T2);
    const std::vector<Complex> u_roots =
        pair.u_coeffs.size() >= 2 ? poly_roots(pair.u_coeffs)
                                  : std::vector<Complex>{};

    std::vector<bool> removed(roots.size(), false);
    for (const Complex& ur : u_roots) {
        // each root of U doubles a zero of T^2-1: drop the two nearest
        for (int rep = 0; rep < 2; ++rep) {
            int best = -1;
            Real best_d = match_tol * (1.0 + std::abs(ur));
            for (std::size_t i = 0; i < roots.size(); ++i) {
                if (removed[i]) continue;
                const Real d = std::abs(roots[i] - ur);
                if (d <= best_d) {
                    best_d = d;
                    best = static_cast<int>(i);
                }
            }
            if (best >= 0) removed[static_cast<std::size_t>(best)] = true;
        }
    }

    std::vector<Complex> rest;
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (!removed[i]) rest.push_back(roots[i]);

    if (rest.size() != 4) {
        // collapse residual clusters before giving up (double roots split
        // by the root finder land as near pairs)
        const auto clusters = cluster_points(rest, 10 * match_tol);
        std::vector<Complex> odd;
        for (const auto& [c, cnt] : clusters)
            if (cnt % 2 == 1) odd.push_back(c);
        if (odd.size() == 4) {
            rest = odd;
        } else {
            throw not_two_arc_error(
                "not a two-arc polynomial: odd-multiplicity zero count is " +
                    std::to_string(odd.size() == 0 ? rest.size() : odd.size()),
                static_cast<int>(odd.size() == 0 ? rest.size() : odd.size()));
        }
    }
    std::sort(rest.begin(), rest.end(), [](Complex a, Complex b) {
        return std::make_pair(a.real(), a.imag()) <
               std::make_pair(b.real(), b.imag());
    });
    return rest;
}

PreimageTrace trace_preimage(const PolynomialPair& pair, int samples) {
    validate_pair_shape(pair);
    if (samples < 16) throw domain_error("trace needs samples >= 16");
    const int n = pair.degree();

    PreimageTrace trace;
    trace.points.reserve(static_cast<std::size_t>(samples) + 1);

    std::vector<Complex> prev;
    std::vector<std::vector<Complex>> branches(
        static_cast<std::size_t>(n));
    // point index of branch b at level j is j*n + b
    std::vector<std::pair<int, int>> contact_edges;

    for (int j = 0; j <= samples; ++j) {
        const Real t = std::cos(pi * static_cast<Real>(j) / samples);
        ComplexVector shifted = pair.t_coeffs;
        shifted(0) -= t;
        std::vector<Complex> roots = poly_roots(shifted, prev);

        // polish each root against the level
        for (Complex& z : roots) {
            for (int s = 0; s < 2; ++s) {
                const auto [p, dp] = eval_poly_deriv(shifted, z);
                if (std::abs(dp) < 1e-280) break;
                const Complex step = p / dp;
                if (!is_finite(step) || std::abs(step) > 0.5) break;
                z -= step;
            }
        }

        if (!prev.empty()) {
            const std::vector<int> order = match_roots(prev, roots);
            std::vector<Complex> arranged(roots.size());
            for (std::size_t b = 0; b < roots.size(); ++b)
                arranged[b] = roots[static_cast<std::size_t>(order[b])];
            roots = std::move(arranged);
        }

        // Two branches count as touching when their separation is within
        // their own per-level movement: root collisions at critical values
        // separate like sqrt(t - t_c), so a fixed epsilon cannot see them.
        if (!prev.empty()) {
            bool flagged_here = false;
            for (std::size_t a = 0; a < roots.size(); ++a) {
                const Real move_a = std::abs(roots[a] - prev[a]);
                for (std::size_t b = a + 1; b < roots.size(); ++b) {
                    const Real d = std::abs(roots[a] - roots[b]);
                    const Real move_b = std::abs(roots[b] - prev[b]);
                    if (d <= 2.5 * (move_a + move_b)) {
                        // all four sample points around the contact lie in
                        // its collision neighborhood
                        const int ia = j * n + static_cast<int>(a);
                        const int ib = j * n + static_cast<int>(b);
                        contact_edges.emplace_back(ia, ib);
                        contact_edges.emplace_back(ia, ia - n);
                        contact_edges.emplace_back(ib, ib - n);
                        flagged_here = true;
                    }
                }
            }
            if (flagged_here) trace.flagged.push_back(j);
        }

        for (std::size_t b = 0; b < roots.size(); ++b)
            branches[b].push_back(roots[b]);
        trace.points.push_back({t, roots});
        prev = roots;
    }

    trace.gamma = std::move(branches);
    try {
        trace.endpoint_estimates = odd_zero_estimates(pair);
    } catch (const error&) {
        // leave empty; tracing itself is still valid
    }

    std::vector<Complex> all;
    for (const auto& level : trace.points)
        all.insert(all.end(), level.roots.begin(), level.roots.end());
    Real diam = point_set_diameter(
        trace.endpoint_estimates.empty() ? all : trace.endpoint_estimates);
    if (diam <= 0.0) diam = 1.0;
    const Real eps = 10.0 / samples * diam;
    trace.component_count = count_components(all, eps, contact_edges);
    return trace;
}

std::string trace_to_csv(const PreimageTrace& trace) {
    std::string out = "t,re,im,branch\n";
    for (std::size_t b = 0; b < trace.gamma.size(); ++b) {
        for (std::size_t j = 0; j < trace.gamma[b].size(); ++j) {
            out += format_real(trace.points[j].t, "%.17g");
            out += ',';
            out += format_real(trace.gamma[b][j].real(), "%.17g");
            out += ',';
            out += format_real(trace.gamma[b][j].imag(), "%.17g");
            out += ',';
            out += std::to_string(b);
            out += '\n';
        }
    }
    return out;
}

std::string trace_to_svg(const PreimageTrace& trace) {
    Real xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& branch : trace.gamma) {
        for (const Complex& z : branch) {
            xmin = std::min(xmin, z.real());
            xmax = std::max(xmax, z.real());
            ymin = std::min(ymin, z.imag());
            ymax = std::max(ymax, z.imag());
        }
    }
    if (xmin > xmax) {
        xmin = ymin = -1.0;
        xmax = ymax = 1.0;
    }
    const Real margin = 0.05 * std::max(xmax - xmin, ymax - ymin) + 1e-3;
    xmin -= margin;
    xmax += margin;
    ymin -= margin;
    ymax += margin;

    static const char* palette[] = {"#204a87", "#a40000", "#4e9a06",
                                    "#ce5c00", "#5c3566", "#c4a000"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    svg += format_real(xmin, "%.6f") + " " + format_real(-ymax, "%.6f") + " " +
           format_real(xmax - xmin, "%.6f") + " " +
           format_real(ymax - ymin, "%.6f") + "\">\n";
    const Real stroke = 0.004 * std::max(xmax - xmin, ymax - ymin);
    for (std::size_t b = 0; b < trace.gamma.size(); ++b) {
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += palette[b % 6];
        svg += "\" stroke-width=\"" + format_real(stroke, "%.6f") +
               "\" points=\"";
        for (const Complex& z : trace.gamma[b]) {
            svg += format_real(z.real(), "%.6f") + "," +
                   format_real(-z.imag(), "%.6f") + " ";
        }
        svg += "\"/>\n";
    }
    for (const Complex& e : trace.endpoint_estimates) {
        svg += "<circle cx=\"" + format_real(e.real(), "%.6f") + "\" cy=\"" +
               format_real(-e.imag(), "%.6f") + "\" r=\"" +
               format_real(2.0 * stroke, "%.6f") + "\" fill=\"#2e3436\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace twoarc
