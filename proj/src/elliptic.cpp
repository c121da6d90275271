#include "twoarc/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace twoarc {

namespace {

constexpr int kMaxAgmIter = 60;
constexpr int kMaxThetaTerms = 200;

// Theta series reduced by their common prefactors:
//   t1 = sum (-1)^j q^{j(j+1)} sin((2j+1)v)      [theta1 = 2 q^{1/4} t1]
//   t2 = sum        q^{j(j+1)} cos((2j+1)v)      [theta2 = 2 q^{1/4} t2]
//   t3 = 1 + 2 sum q^{j^2} cos(2jv)
//   t4 = 1 + 2 sum (-1)^j q^{j^2} cos(2jv)
// The q^{1/4} prefactors cancel in every quotient used below.
struct ThetaValues {
    Complex t1, t2, t3, t4;
};

ThetaValues theta_series(Complex v, Complex q) {
    ThetaValues th{Complex(0), Complex(0), Complex(1), Complex(1)};
    const Complex q2 = q * q;
    Complex p = Complex(1);     // q^{j(j+1)}
    Complex e = Complex(1);     // q^{2j}
    Complex qj2 = Complex(1);   // q^{j^2}
    Complex odd = q;            // q^{2j-1}
    Real sign = 1.0;
    // log-magnitude bound on the j-th terms; evaluating sin((2j+1)v) past
    // the cutoff would overflow long before the q powers damp it
    const Real logq = std::log(std::abs(q));
    const Real a = std::abs(v.imag());
    const Real cutoff = a - 60.0;
    for (int j = 0; j < kMaxThetaTerms; ++j) {
        if (j > 0) {
            e *= q2;
            p *= e;
            qj2 *= odd;
            odd *= q2;
            sign = -sign;
            const Real jr = static_cast<Real>(j);
            const Real bound =
                std::max((jr * jr + jr) * logq + (2.0 * jr + 1.0) * a,
                         jr * jr * logq + 2.0 * jr * a);
            if (bound < cutoff) return th;
        }
        const Real arg1 = 2.0 * j + 1.0;
        const Complex s = std::sin(arg1 * v);
        const Complex c = std::cos(arg1 * v);
        th.t1 += sign * p * s;
        th.t2 += p * c;
        if (j >= 1) {
            const Complex c2 = std::cos(2.0 * j * v);
            const Complex add3 = 2.0 * qj2 * c2;
            th.t3 += add3;
            th.t4 += sign * add3;
        }
    }
    throw numeric_error("theta series did not converge (|q| too close to 1)",
                        std::abs(q));
}

Complex agm(Complex a, Complex b) {
    for (int i = 0; i < kMaxAgmIter; ++i) {
        if (std::abs(a - b) <= 1e-15 * std::abs(a)) break;
        const Complex a1 = 0.5 * (a + b);
        Complex b1 = std::sqrt(a * b);
        if (std::abs(a1 - b1) > std::abs(a1 + b1)) b1 = -b1;
        a = a1;
        b = b1;
    }
    if (std::abs(a - b) > 1e-10 * std::abs(a))
        throw numeric_error("AGM did not converge", std::abs(a - b));
    return 0.5 * (a + b);
}

// Nearest representative of x in [-1, 1) modulo 2, with the integer shift.
std::pair<Real, long> reduce_mod2(Real x) {
    const Real shifted = std::floor(0.5 * (x + 1.0));
    return {x - 2.0 * shifted, static_cast<long>(shifted)};
}

}  // namespace

bool in_modulus_domain(Complex k, Real slack) {
    if (!is_finite(k)) return false;
    if (k.real() <= 0.0) return false;
    if (std::abs(k) > 1.0 + slack) return false;
    if (std::abs(k - Complex(1.0)) <= slack) return false;
    return true;
}

Modulus complete_integrals(Complex k) {
    if (!in_modulus_domain(k))
        throw domain_error("modulus outside branch domain (need |k|<=1, Re k>0, k!=1)");
    Modulus m;
    m.k = k;
    m.kprime = std::sqrt(Complex(1.0) - k * k);  // Re >= 0 on the domain
    m.K = Complex(pi) / (2.0 * agm(Complex(1.0), m.kprime));
    m.Kprime = Complex(pi) / (2.0 * agm(Complex(1.0), k));
    const Complex ratio = m.Kprime / m.K;
    if (ratio.real() <= 0.0)
        throw numeric_error("period ratio iK'/K left the upper half plane",
                            ratio.real());
    m.nome = std::exp(-pi * ratio);
    const ThetaValues z = theta_series(Complex(0), m.nome);
    m.theta2z = z.t2;
    m.theta3z = z.t3;
    m.theta4z = z.t4;
    return m;
}

Real pole_distance(Complex u, const Modulus& m) {
    const auto [lambda, lambda_prime] = lattice_coords(u, m);
    // poles sit at lattice coordinates (even, odd)
    const Real pa = 2.0 * std::round(0.5 * lambda);
    const Real pb = 2.0 * std::round(0.5 * (lambda_prime - 1.0)) + 1.0;
    const Complex pole = pa * m.K + Complex(0, 1) * pb * m.Kprime;
    return std::abs(u - pole);
}

JacobiValues jacobi_fns(Complex u, const Modulus& m) {
    const Real pole_floor = 1e-8 * std::min(std::abs(m.K), std::abs(m.Kprime));
    const Real dist = pole_distance(u, m);
    if (dist < pole_floor)
        throw pole_error("argument too close to a pole of sn/cn/dn", dist);

    auto [alpha, beta] = lattice_coords(u, m);
    const auto [ar, p] = reduce_mod2(alpha);
    const auto [br, r] = reduce_mod2(beta);
    const Complex ur = ar * m.K + Complex(0, 1) * br * m.Kprime;
    const Complex v = pi * ur / (2.0 * m.K);

    const ThetaValues th = theta_series(v, m.nome);
    const Real sn_sign = (p % 2 == 0) ? 1.0 : -1.0;
    const Real dn_sign = (r % 2 == 0) ? 1.0 : -1.0;

    JacobiValues out;
    out.sn = sn_sign * (m.theta3z / m.theta2z) * (th.t1 / th.t4);
    out.cn = sn_sign * dn_sign * (m.theta4z / m.theta2z) * (th.t2 / th.t4);
    out.dn = dn_sign * (m.theta4z / m.theta3z) * (th.t3 / th.t4);
    return out;
}

std::pair<Real, Real> lattice_coords(Complex u, const Modulus& m) {
    Eigen::Matrix2d frame;
    frame << m.K.real(), -m.Kprime.imag(),
             m.K.imag(),  m.Kprime.real();
    if (std::abs(frame.determinant()) <
        1e-14 * std::abs(m.K) * std::abs(m.Kprime))
        throw numeric_error("degenerate period frame: iK'/K is real",
                            frame.determinant());
    const Eigen::Vector2d rhs(u.real(), u.imag());
    const Eigen::Vector2d sol = frame.partialPivLu().solve(rhs);
    return {sol(0), sol(1)};
}

bool in_half_parallelogram(Real lambda, Real lambda_prime) {
    if (lambda >= 0.0 && lambda <= 1.0 && lambda_prime >= 0.0 && lambda_prime <= 1.0)
        return true;
    return lambda > 0.0 && lambda < 1.0 && lambda_prime > -1.0 && lambda_prime < 0.0;
}

Complex carlson_rf(Complex x, Complex y, Complex z) {
    Complex mu;
    for (int i = 0; i < 120; ++i) {
        const Complex sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const Complex lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        mu = (x + y + z) / 3.0;
        const Real spread = std::max({std::abs(x - mu), std::abs(y - mu),
                                      std::abs(z - mu)});
        if (spread < 1e-12 * std::abs(mu)) break;
    }
    const Complex X = Complex(1.0) - x / mu;
    const Complex Y = Complex(1.0) - y / mu;
    const Complex Z = Complex(1.0) - z / mu;
    const Complex E2 = X * Y + Y * Z + Z * X;
    const Complex E3 = X * Y * Z;
    return (Complex(1.0) - E2 / 10.0 + E3 / 14.0 + E2 * E2 / 24.0 -
            3.0 * E2 * E3 / 44.0) / std::sqrt(mu);
}

namespace {

// Fold (lambda, lambda') into the half parallelogram using the 2-periodicity
// and evenness of sn^2. Boundary ties prefer lambda' >= 0, then lambda >= 0.
std::pair<Real, Real> fold_into_P(Real lambda, Real lambda_prime) {
    std::array<std::pair<Real, Real>, 4> cands;
    int count = 0;
    for (Real s : {1.0, -1.0}) {
        Real L = std::fmod(s * lambda, 2.0);
        if (L < 0.0) L += 2.0;
        Real Lp = std::fmod(s * lambda_prime, 2.0);
        if (Lp < 0.0) Lp += 2.0;
        if (L <= 1.0 && Lp <= 1.0) cands[count++] = {L, Lp};
        if (L > 0.0 && L < 1.0 && Lp > 1.0 && Lp < 2.0)
            cands[count++] = {L, Lp - 2.0};
    }
    std::pair<Real, Real> best{0.0, 0.0};
    bool have = false;
    for (int i = 0; i < count; ++i) {
        if (!in_half_parallelogram(cands[i].first, cands[i].second)) continue;
        if (!have) {
            best = cands[i];
            have = true;
            continue;
        }
        const auto pref = [](const std::pair<Real, Real>& c) {
            return std::make_pair(c.second < 0.0, c.first < 0.0);
        };
        if (pref(cands[i]) < pref(best)) best = cands[i];
    }
    if (!have) {
        // roundoff can push a boundary point just outside; clamp the
        // plain mod-2 representative
        Real L = std::clamp(std::fmod(lambda + 2.0, 2.0), 0.0, 1.0);
        Real Lp = std::fmod(lambda_prime + 2.0, 2.0);
        if (Lp > 1.0) Lp -= 2.0;
        Lp = std::clamp(Lp, -1.0, 1.0);
        best = {L, Lp};
    }
    return best;
}

Real sphere_distance(Complex a, Complex b) {
    if (is_infinity(a) || is_infinity(b)) {
        if (is_infinity(a) && is_infinity(b)) return 0.0;
        const Complex f = is_infinity(a) ? b : a;
        return 1.0 / std::sqrt(1.0 + std::norm(f));
    }
    return std::abs(a - b) /
           std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

LatticeCoord make_coord(Real lambda, Real lambda_prime, const Modulus& m) {
    LatticeCoord c;
    c.lambda = lambda;
    c.lambda_prime = lambda_prime;
    c.rho = lambda * m.K + Complex(0, 1) * lambda_prime * m.Kprime;
    return c;
}

// One Newton stage on rho; solves sn^2 = w (or 1/sn^2 = 1/w for large w).
Complex polish_inverse(Complex rho, Complex w, const Modulus& m) {
    const bool inverted = std::abs(w) > 4.0;
    const Complex target = inverted ? Complex(1.0) / w : w;
    auto residual = [&](Complex z) -> Complex {
        const JacobiValues jv = jacobi_fns(z, m);
        const Complex s2 = jv.sn * jv.sn;
        return inverted ? Complex(1.0) / s2 - target : s2 - target;
    };
    Complex f = residual(rho);
    for (int it = 0; it < 8; ++it) {
        const JacobiValues jv = jacobi_fns(rho, m);
        Complex fp;
        if (inverted)
            fp = -2.0 * jv.cn * jv.dn / (jv.sn * jv.sn * jv.sn);
        else
            fp = 2.0 * jv.sn * jv.cn * jv.dn;
        if (std::abs(fp) < 1e-290) break;
        Complex step = f / fp;
        bool improved = false;
        for (int h = 0; h < 5; ++h) {
            const Complex trial = rho - step;
            const Complex ft = residual(trial);
            if (std::abs(ft) < std::abs(f)) {
                rho = trial;
                f = ft;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved || std::abs(f) < 1e-16) break;
    }
    return rho;
}

}  // namespace

LatticeCoord inverse_sn2(Complex w, const Modulus& m, Real tol) {
    // corner images map back without iteration
    if (is_infinity(w)) return make_coord(0.0, 1.0, m);
    if (w == Complex(0.0)) return make_coord(0.0, 0.0, m);
    if (w == Complex(1.0)) return make_coord(1.0, 0.0, m);
    if (w == m.inv_k2()) return make_coord(1.0, 1.0, m);

    const Complex k2 = m.k2();
    if (std::abs(w) > 1e12) {
        // sn(iK' + eps) ~ 1/(k eps); the expansion already beats the
        // tolerance 1e-8*(1+|w|) here and Newton would sit on a pole
        const Complex eps = Complex(1.0) / (m.k * std::sqrt(w));
        auto [le, lpe] = lattice_coords(Complex(0, 1) * m.Kprime + eps, m);
        auto [L, Lp] = fold_into_P(le, lpe);
        return make_coord(L, Lp, m);
    }
    const Complex u0 = std::sqrt(w) *
                       carlson_rf(Complex(1.0) - w, Complex(1.0) - k2 * w,
                                  Complex(1.0));
    auto [l0, lp0] = lattice_coords(u0, m);
    auto [lambda, lambda_prime] = fold_into_P(l0, lp0);

    Complex rho = lambda * m.K + Complex(0, 1) * lambda_prime * m.Kprime;
    try {
        rho = polish_inverse(rho, w, m);
    } catch (const pole_error&) {
        // keep the Carlson seed
    }

    auto accept = [&](Complex z) {
        try {
            const JacobiValues jv = jacobi_fns(z, m);
            return std::abs(jv.sn * jv.sn - w) <= tol * (1.0 + std::abs(w));
        } catch (const pole_error&) {
            return false;
        }
    };

    if (!accept(rho)) {
        // seed landed on a bad branch seam; rescan the parallelogram
        const int grid = 48;
        Real best = std::numeric_limits<Real>::max();
        Complex best_rho = rho;
        for (int i = 1; i < grid; ++i) {
            for (int j = -grid + 1; j < grid; ++j) {
                const Real L = static_cast<Real>(i) / grid;
                const Real Lp = static_cast<Real>(j) / grid;
                const Complex z = L * m.K + Complex(0, 1) * Lp * m.Kprime;
                if (pole_distance(z, m) <
                    1e-6 * std::min(std::abs(m.K), std::abs(m.Kprime)))
                    continue;
                const JacobiValues jv = jacobi_fns(z, m);
                const Real d = sphere_distance(jv.sn * jv.sn, w);
                if (d < best) {
                    best = d;
                    best_rho = z;
                }
            }
        }
        try {
            rho = polish_inverse(best_rho, w, m);
        } catch (const pole_error&) {
            rho = best_rho;
        }
        if (!accept(rho)) {
            Real resid = std::numeric_limits<Real>::infinity();
            try {
                const JacobiValues jv = jacobi_fns(rho, m);
                resid = std::abs(jv.sn * jv.sn - w);
            } catch (const pole_error&) {
            }
            throw numeric_error("inverse_sn2 failed to meet tolerance", resid);
        }
    }

    auto [lf, lpf] = lattice_coords(rho, m);
    auto [L, Lp] = fold_into_P(lf, lpf);
    return make_coord(L, Lp, m);
}

}  // namespace twoarc
