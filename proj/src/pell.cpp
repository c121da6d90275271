#include "twoarc/pell.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twoarc/density.hpp"

namespace twoarc {

namespace {

constexpr int kMaxDegree = 32;

ComplexVector quartic_from_points(const std::array<Complex, 4>& pts) {
    return poly_from_roots(std::span<const Complex>(pts.data(), 4));
}

// Defect polynomial T^2 - 1 - H U^2.
ComplexVector defect(const ComplexVector& T, const ComplexVector& U,
                     const ComplexVector& H) {
    ComplexVector R = poly_conv(T, T);
    R(0) -= 1.0;
    const ComplexVector HU2 = poly_conv(H, poly_conv(U, U));
    R.head(HU2.size()) -= HU2;
    return R;
}

Real scaled_defect_norm(const ComplexVector& T, const ComplexVector& U,
                        const ComplexVector& H) {
    const Complex tau = T(T.size() - 1);
    return defect(T, U, H).cwiseAbs().maxCoeff() / std::norm(tau);
}

// Laurent tail of sqrt(H): series y with y(w)^2 = w^4 H(1/w), y(0) = 1, so
// sqrt(H)(z) ~ sum_m y_m z^{2-m}.
std::vector<Complex> sqrt_series(const ComplexVector& H, int order) {
    std::vector<Complex> f(static_cast<std::size_t>(order) + 1, Complex(0.0));
    for (int i = 0; i <= 4 && i <= order; ++i) f[static_cast<std::size_t>(i)] =
        H(4 - i);
    std::vector<Complex> y(static_cast<std::size_t>(order) + 1, Complex(0.0));
    y[0] = Complex(1.0);
    for (int m = 1; m <= order; ++m) {
        Complex s(0.0);
        for (int j = 1; j < m; ++j)
            s += y[static_cast<std::size_t>(j)] *
                 y[static_cast<std::size_t>(m - j)];
        y[static_cast<std::size_t>(m)] =
            (f[static_cast<std::size_t>(m)] - s) / 2.0;
    }
    return y;
}

// Linear construction: a monic U of degree n-2 such that sqrt(H) U has no
// z^{-1}..z^{-(n-1)} terms; then T = polynomial part of sqrt(H) U and the
// pair is rescaled so the defect constant vanishes.
struct LinearSeed {
    ComplexVector T, U;
};

LinearSeed asymptotic_seed(const ComplexVector& H, int n) {
    const std::vector<Complex> y = sqrt_series(H, 2 * n + 2);
    const int rows = n - 1, cols = n - 2;

    ComplexVector u(cols + 1);
    if (cols > 0) {
        Eigen::MatrixXcd A(rows, cols);
        Eigen::VectorXcd b(rows);
        for (int r = 1; r <= rows; ++r) {
            for (int i = 0; i < cols; ++i)
                A(r - 1, i) = y[static_cast<std::size_t>(i + r + 2)];
            b(r - 1) = -y[static_cast<std::size_t>(n + r)];
        }
        Eigen::VectorXd scale(cols);
        for (int i = 0; i < cols; ++i)
            scale(i) = std::max(A.col(i).norm(), 1e-300);
        const Eigen::MatrixXcd As = A * scale.cwiseInverse().asDiagonal();
        const Eigen::VectorXcd sol = As.colPivHouseholderQr().solve(b);
        u.head(cols) = scale.cwiseInverse().asDiagonal() * sol;
    }
    u(cols) = Complex(1.0);

    ComplexVector T = ComplexVector::Zero(n + 1);
    for (int j = 0; j <= n; ++j) {
        Complex s(0.0);
        for (int i = 0; i <= cols; ++i)
            if (i + 2 - j >= 0) s += u(i) * y[static_cast<std::size_t>(i + 2 - j)];
        T(j) = s;
    }

    const Complex c0 = defect(T, u, H)(0) + Complex(1.0);  // T^2 - H U^2 at 0
    if (c0 == Complex(0.0))
        throw numeric_error("degenerate asymptotic seed", 0.0);
    const Complex tau = Complex(1.0) / std::sqrt(c0);
    return LinearSeed{T * tau, u * tau};
}

// Gauss-Newton on the coefficient defect with the leading coefficients of T
// and U tied to one unknown. Once the endpoint values resolve to +-1, four
// value equations are appended so the stored coefficients reproduce
// |T(a_i)| = 1 to full precision.
void gauss_newton(ComplexVector& T, ComplexVector& U, const ComplexVector& H,
                  const std::array<Complex, 4>& pts, int iters) {
    const int n = static_cast<int>(T.size()) - 1;
    const int m = 2 * n + 1;
    const int p = 2 * n - 1;

    std::array<Complex, 4> signs{};
    bool have_signs = false;

    // endpoint rows enter the least squares at the Jacobian scale of the
    // coefficient rows (~|tau|), not |tau|^2, or they drown them out
    auto endpoint_weight = [&]() {
        return std::max(std::abs(T(n)), 1.0);
    };

    auto residual = [&](const ComplexVector& Tc, const ComplexVector& Uc,
                        bool with_pts, Real w) {
        const ComplexVector R = defect(Tc, Uc, H);
        Eigen::VectorXcd r(with_pts ? m + 4 : m);
        r.head(m) = R;
        if (with_pts)
            for (int i = 0; i < 4; ++i)
                r(m + i) =
                    w * (eval_poly(Tc, pts[static_cast<std::size_t>(i)]) -
                         signs[static_cast<std::size_t>(i)]);
        return r;
    };

    for (int it = 0; it < iters; ++it) {
        if (!have_signs) {
            bool ok = true;
            for (int i = 0; i < 4; ++i) {
                const Complex v =
                    eval_poly(T, pts[static_cast<std::size_t>(i)]);
                const Real dplus = std::abs(v - Complex(1.0));
                const Real dminus = std::abs(v + Complex(1.0));
                if (std::min(dplus, dminus) > 0.2) {
                    ok = false;
                    break;
                }
                signs[static_cast<std::size_t>(i)] =
                    dplus < dminus ? Complex(1.0) : Complex(-1.0);
            }
            have_signs = ok;
        }
        const Real w = endpoint_weight();
        const Eigen::VectorXcd r0 = residual(T, U, have_signs, w);
        const int rows = static_cast<int>(r0.size());

        Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(rows, p);
        const ComplexVector HU = poly_conv(H, U);
        // column 0: shared leading coefficient
        for (int i = 0; i <= n && n + i < m; ++i) J(n + i, 0) += 2.0 * T(i);
        for (int i = 0; i < HU.size() && n - 2 + i < m; ++i)
            J(n - 2 + i, 0) -= 2.0 * HU(i);
        if (have_signs)
            for (int i = 0; i < 4; ++i)
                J(m + i, 0) = w * std::pow(pts[static_cast<std::size_t>(i)], n);
        // t_j columns
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i <= n && j + i < m; ++i)
                J(j + i, 1 + j) += 2.0 * T(i);
            if (have_signs)
                for (int i = 0; i < 4; ++i)
                    J(m + i, 1 + j) =
                        w * std::pow(pts[static_cast<std::size_t>(i)], j);
        }
        // u_j columns
        for (int j = 0; j < n - 2; ++j)
            for (int i = 0; i < HU.size() && j + i < m; ++i)
                J(j + i, 1 + n + j) -= 2.0 * HU(i);

        const Eigen::VectorXcd step = J.colPivHouseholderQr().solve(-r0);
        const Real r0n = r0.norm();
        bool improved = false;
        Real damp = 1.0;
        for (int h = 0; h < 6; ++h) {
            ComplexVector Tn = T, Un = U;
            Tn(n) += damp * step(0);
            Un(n - 2) += damp * step(0);
            for (int j = 0; j < n; ++j) Tn(j) += damp * step(1 + j);
            for (int j = 0; j < n - 2; ++j) Un(j) += damp * step(1 + n + j);
            if (residual(Tn, Un, have_signs, w).norm() < r0n) {
                T = Tn;
                U = Un;
                improved = true;
                break;
            }
            damp *= 0.5;
        }
        if (!improved) break;
    }
}

struct FramedTuple {
    std::array<Complex, 4> pts;  // normalized endpoints
    Complex center;
    Complex scale;
};

FramedTuple normalize_frame(const EndpointTuple& t) {
    FramedTuple f;
    const auto a = t.points();
    f.center = (a[0] + a[1] + a[2] + a[3]) / 4.0;
    Real s = 0.0;
    for (const Complex& z : a) s = std::max(s, std::abs(z - f.center));
    f.scale = Complex(s);
    for (int i = 0; i < 4; ++i)
        f.pts[static_cast<std::size_t>(i)] =
            (a[static_cast<std::size_t>(i)] - f.center) / f.scale;
    return f;
}

// Primitive-degree solve in the normalized frame.
struct FramePair {
    ComplexVector T, U;
};

FramePair solve_primitive(const std::array<Complex, 4>& pts, int n0,
                          Real target) {
    const ComplexVector H = quartic_from_points(pts);
    LinearSeed seed = asymptotic_seed(H, n0);
    gauss_newton(seed.T, seed.U, H, pts, 50);
    const Real res = scaled_defect_norm(seed.T, seed.U, H);
    if (res <= target) return FramePair{seed.T, seed.U};
    throw numeric_error("primitive Pell solve stalled", res);
}

// Modulus-path homotopy: walk k from a mild real value to the target,
// synthesizing the exact tuple with the same lattice numerators at each
// step and tracking the solution with Gauss-Newton.
FramePair solve_primitive_homotopy(const std::array<Complex, 4>& pts, int n0,
                                   long m0, long mp0, Complex k_target,
                                   Real target) {
    const Complex a1 = pts[0], a4 = pts[3];
    auto synth = [&](Complex k) -> std::array<Complex, 4> {
        const Modulus mod = complete_integrals(k);
        const Complex rho =
            (static_cast<Real>(m0) / n0) * mod.K +
            Complex(0, 1) * (static_cast<Real>(mp0) / n0) * mod.Kprime;
        const JacobiValues jv = jacobi_fns(rho, mod);
        const Complex a2 = a4 - (a4 - a1) * jv.sn * jv.sn;
        const Complex k2 = mod.k2();
        const Complex kp2 = mod.kprime * mod.kprime;
        const Complex A1 = (a4 - kp2 * a1) / k2;
        const Complex A2 = k2 * a1 * a4 / (kp2 * a1 - a4);
        const Complex A3 = (kp2 * a4 - a1) / k2;
        const Complex a3 = A1 * (a2 + A2) / (a2 + A3);
        return {a1, a2, a3, a4};
    };

    const Complex k_easy(0.5, 0.0);
    std::array<Complex, 4> cur_pts = synth(k_easy);
    ComplexVector H = quartic_from_points(cur_pts);
    LinearSeed seed = asymptotic_seed(H, n0);
    gauss_newton(seed.T, seed.U, H, cur_pts, 50);
    if (scaled_defect_norm(seed.T, seed.U, H) > 1e-6)
        throw numeric_error("homotopy start did not converge",
                            scaled_defect_norm(seed.T, seed.U, H));

    Real s = 0.0;
    Real step = 1.0 / 12.0;
    ComplexVector T = seed.T, U = seed.U;
    int guard = 0;
    while (s < 1.0 && ++guard < 400) {
        const Real s_next = std::min(1.0, s + step);
        const Complex k = k_easy + (k_target - k_easy) * s_next;
        const std::array<Complex, 4> trial_pts = synth(k);
        const ComplexVector Ht = quartic_from_points(trial_pts);
        ComplexVector Tt = T, Ut = U;
        gauss_newton(Tt, Ut, Ht, trial_pts, 30);
        if (scaled_defect_norm(Tt, Ut, Ht) <= 1e-6) {
            T = Tt;
            U = Ut;
            s = s_next;
            step = std::min(step * 2.0, 1.0 / 8.0);
        } else {
            step *= 0.5;
            if (step < 1e-4)
                throw numeric_error("homotopy step collapsed",
                                    scaled_defect_norm(Tt, Ut, Ht));
        }
    }

    // final polish against the actual tuple
    const ComplexVector Hf = quartic_from_points(pts);
    gauss_newton(T, U, Hf, pts, 50);
    const Real res = scaled_defect_norm(T, U, Hf);
    if (res > target)
        throw numeric_error("Gauss-Newton non-convergence after homotopy",
                            res);
    return FramePair{T, U};
}

long gcd3(long a, long b, long c) {
    return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
}

// Pins T(a_i) onto its +-1 value by a tiny correction of the low-order
// coefficients (4x4 Vandermonde, or least squares below degree 3). The
// coefficient moves are O(endpoint defect), far below one ulp of the large
// coefficients' Pell-metric budget, but they remove the evaluation defect
// left by the affine change of frame.
void refine_endpoint_values(ComplexVector& T,
                            const std::array<Complex, 4>& pts) {
    const int n = static_cast<int>(T.size()) - 1;
    const int cols = std::min(4, n);  // never touch the leading coefficient
    for (int pass = 0; pass < 3; ++pass) {
        Eigen::MatrixXcd V(4, cols);
        Eigen::VectorXcd defect(4);
        Real worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            const Complex z = pts[static_cast<std::size_t>(i)];
            const Complex val = eval_poly(T, z);
            const Complex target =
                std::abs(val - Complex(1.0)) < std::abs(val + Complex(1.0))
                    ? Complex(1.0)
                    : Complex(-1.0);
            defect(i) = target - val;
            worst = std::max(worst, std::abs(defect(i)));
            Complex zp(1.0);
            for (int j = 0; j < cols; ++j) {
                V(i, j) = zp;
                zp *= z;
            }
        }
        if (worst < 1e-14) break;
        const Eigen::VectorXcd delta = V.colPivHouseholderQr().solve(defect);
        if (!delta.allFinite()) break;
        for (int j = 0; j < cols; ++j) T(j) += delta(j);
    }
}

}  // namespace

Real pell_residual(const PolynomialPair& pair, const EndpointTuple& t) {
    const int n = pair.degree();
    if (n < 2) throw shape_error("pair degree must be at least 2");
    if (pair.t_coeffs.size() != n + 1 ||
        pair.u_coeffs.size() != n - 1)
        throw shape_error("coefficient vectors have inconsistent lengths");
    validate_distinct(t);
    const ComplexVector H = quartic_from_points(t.points());
    return scaled_defect_norm(pair.t_coeffs, pair.u_coeffs, H);
}

PolynomialPair construct_pair(const EndpointTuple& t,
                              const TupleCertificate& cert, Real accept_tol) {
    if (!cert.accepted)
        throw domain_error("construct_pair requires an accepted certificate");
    const int n = cert.n;
    if (n < 2 || n > kMaxDegree)
        throw domain_error("supported degrees are 2 <= n <= 32");

    const EndpointTuple canon = t.canonical ? t : canonical_order(t).tuple;
    const TupleCertificate check = is_tn_tuple(canon, n);
    if (!check.accepted)
        throw domain_error("tuple is not certified at this degree");

    const long g = gcd3(check.m, check.m_prime, n);
    const int n0 = static_cast<int>(n / g);
    if (n0 < 2)
        throw degeneracy_error("lattice point is a corner; no two-arc pair");

    const FramedTuple frame = normalize_frame(canon);
    const ComplexVector Hb = quartic_from_points(frame.pts);

    FramePair fp;
    try {
        fp = solve_primitive(frame.pts, n0, std::min(accept_tol, 1e-10));
    } catch (const numeric_error&) {
        const Modulus mod = modulus_from_tuple(canon);
        fp = solve_primitive_homotopy(frame.pts, n0, check.m / g,
                                      check.m_prime / g, mod.k,
                                      std::min(accept_tol, 1e-10));
    }

    // grow the degree gradually, re-polishing after every composition step
    // so rounding in the convolutions never accumulates
    long remaining = g;
    while (remaining > 1) {
        const long factor = remaining % 2 == 0 ? 2 : remaining;
        const ComplexVector Tf = chebyshev_t(static_cast<int>(factor));
        const ComplexVector Uf1 = chebyshev_u(static_cast<int>(factor) - 1);
        ComplexVector Tn = poly_compose(Tf, fp.T);
        ComplexVector Un = poly_conv(fp.U, poly_compose(Uf1, fp.T));
        gauss_newton(Tn, Un, Hb, frame.pts, 15);
        fp.T = std::move(Tn);
        fp.U = std::move(Un);
        remaining /= factor;
    }

    // back to the caller's frame: z -> (z - center)/scale
    const Complex alpha = Complex(1.0) / frame.scale;
    const Complex beta = -frame.center / frame.scale;
    PolynomialPair pair;
    pair.t_coeffs = poly_linear_substitute(fp.T, alpha, beta);
    pair.u_coeffs = poly_linear_substitute(fp.U, alpha, beta) /
                    (frame.scale * frame.scale);

    // final polish directly on the returned representation: the affine
    // substitution's rounding is otherwise the accuracy floor at the
    // caller's endpoints
    gauss_newton(pair.t_coeffs, pair.u_coeffs, quartic_from_points(canon.points()),
                 canon.points(), 8);

    // normalization T(a4) = +1; U flips along to keep the shared tau
    const Complex at_a4 = eval_poly(pair.t_coeffs, canon.a4);
    if (std::abs(at_a4 + Complex(1.0)) < std::abs(at_a4 - Complex(1.0))) {
        pair.t_coeffs = -pair.t_coeffs;
        pair.u_coeffs = -pair.u_coeffs;
    }

    // endpoint refinement, rolled back if it costs the Pell gate more than
    // the endpoint values gain
    {
        const ComplexVector saved = pair.t_coeffs;
        const Real before = pell_residual(pair, canon);
        refine_endpoint_values(pair.t_coeffs, canon.points());
        const Real after = pell_residual(pair, canon);
        if (after > std::max(before, 0.2 * accept_tol))
            pair.t_coeffs = saved;
    }

    pair.tau = pair.t_coeffs(n);
    pair.pell_residual = pell_residual(pair, canon);
    if (pair.pell_residual > accept_tol)
        throw numeric_error("construction failed to reach the Pell tolerance",
                            pair.pell_residual);
    return pair;
}

}  // namespace twoarc
