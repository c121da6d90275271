#include "twoarc/density.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "twoarc/parallel.hpp"

namespace twoarc {

namespace {

constexpr Real kIntegerEps = 1e-12;
constexpr Real kExactHitEps = 1e-12;

bool near_integer(Real x) {
    return std::abs(x - std::round(x)) <= kIntegerEps;
}

// rho +- rho~ on the integer lattice {nu K + i nu' K'} would put a pole of
// sn, cn or dn on the difference-formula arguments.
bool lattice_conflict(Real lambda, Real lambda_prime, long m, long m_prime,
                      int n) {
    const Real mu = static_cast<Real>(m) / n;
    const Real mup = static_cast<Real>(m_prime) / n;
    if (near_integer(lambda + mu) && near_integer(lambda_prime + mup))
        return true;
    if (near_integer(lambda - mu) && near_integer(lambda_prime - mup))
        return true;
    // rho~ equivalent to a corner makes sn^2(rho~) hit {0, 1, 1/k^2, inf}
    if (m % n == 0 && m_prime % n == 0) return true;
    return false;
}

Real round_half_away(Real x) {
    return std::round(x);  // std::round rounds halves away from zero
}

struct GridExtrema {
    Real s_max, c_max, d_max, s2_min;
};

// Tracks the four extrema of interest together with their locations.
struct ExtremaScan {
    struct Entry {
        Real val;
        Real mu = 0, mup = 0;
    };
    // s*, c*, d* maxima and the |sn^2 - 1/k^2| minimum
    std::array<Entry, 4> e{{{-1.0}, {-1.0}, {-1.0},
                            {std::numeric_limits<Real>::max()}}};

    void absorb(const ExtremaScan& o) {
        for (int w = 0; w < 3; ++w)
            if (o.e[w].val > e[w].val) e[w] = o.e[w];
        if (o.e[3].val < e[3].val) e[3] = o.e[3];
    }
};

// Extrema of |sn|, |cn|, |dn| and min |sn^2 - 1/k^2| over the coordinate box
// [lo, hi] x [lo', hi'], dense grid plus local refinement.
GridExtrema box_extrema(const Modulus& m, Real lo, Real hi, Real lop, Real hip,
                        int grid, int refine_levels) {
    const Complex inv_k2 = m.inv_k2();

    auto eval = [&](Real mu, Real mup, ExtremaScan& acc) {
        const Complex u = mu * m.K + Complex(0, 1) * mup * m.Kprime;
        JacobiValues jv;
        try {
            jv = jacobi_fns(u, m);
        } catch (const pole_error&) {
            return;  // the box excludes poles; grazing samples are skipped
        }
        const Real vals[4] = {std::abs(jv.sn), std::abs(jv.cn),
                              std::abs(jv.dn),
                              std::abs(jv.sn * jv.sn - inv_k2)};
        for (int w = 0; w < 3; ++w)
            if (vals[w] > acc.e[w].val) acc.e[w] = {vals[w], mu, mup};
        if (vals[3] < acc.e[3].val) acc.e[3] = {vals[3], mu, mup};
    };

    auto scan = [&](Real l0, Real l1, Real p0, Real p1, int g, bool par) {
        std::vector<ExtremaScan> rows(static_cast<std::size_t>(g + 1));
        auto row = [&](std::size_t i) {
            const Real mu = l0 + (l1 - l0) * static_cast<Real>(i) / g;
            for (int j = 0; j <= g; ++j) {
                const Real mup = p0 + (p1 - p0) * static_cast<Real>(j) / g;
                eval(mu, mup, rows[i]);
            }
        };
        if (par)
            parallel_for(static_cast<std::size_t>(g + 1), row);
        else
            for (std::size_t i = 0; i <= static_cast<std::size_t>(g); ++i)
                row(i);
        ExtremaScan total;
        for (const ExtremaScan& r : rows) total.absorb(r);
        return total;
    };

    ExtremaScan best = scan(lo, hi, lop, hip, grid, true);
    const Real dx = (hi - lo) / grid;
    const Real dy = (hip - lop) / grid;
    for (int w = 0; w < 4; ++w) {
        Real bx = dx, by = dy;
        ExtremaScan::Entry cur = best.e[w];
        for (int lvl = 0; lvl < refine_levels; ++lvl) {
            const Real l0 = std::max(lo, cur.mu - bx);
            const Real l1 = std::min(hi, cur.mu + bx);
            const Real p0 = std::max(lop, cur.mup - by);
            const Real p1 = std::min(hip, cur.mup + by);
            const ExtremaScan local = scan(l0, l1, p0, p1, 16, false);
            cur = local.e[w];
            bx /= 8.0;
            by /= 8.0;
        }
        if (w < 3)
            best.e[w].val = std::max(best.e[w].val, cur.val);
        else
            best.e[3].val = std::min(best.e[3].val, cur.val);
    }
    return GridExtrema{best.e[0].val, best.e[1].val, best.e[2].val,
                       best.e[3].val};
}

}  // namespace

MoebiusParams moebius_params(const EndpointTuple& t, const Modulus& m) {
    const Complex k2 = m.k2();
    const Complex kp2 = m.kprime * m.kprime;
    MoebiusParams p;
    p.A1 = (t.a4 - kp2 * t.a1) / k2;
    p.A2 = k2 * t.a1 * t.a4 / (kp2 * t.a1 - t.a4);
    p.A3 = (kp2 * t.a4 - t.a1) / k2;
    if (!is_finite(p.A1) || !is_finite(p.A2) || !is_finite(p.A3))
        throw degeneracy_error("Moebius parameters are not finite");
    return p;
}

std::pair<long, long> nearest_lattice(Real lambda, Real lambda_prime, int n,
                                      const Modulus& /*m*/) {
    if (n < 2) throw domain_error("nearest_lattice requires n >= 2");
    const long m0 = static_cast<long>(round_half_away(n * lambda));
    const long mp0 = static_cast<long>(round_half_away(n * lambda_prime));
    // exact hits: rho~ = rho makes the exclusion vacuous (zero error)
    const bool exact =
        std::abs(lambda - static_cast<Real>(m0) / n) <= kIntegerEps &&
        std::abs(lambda_prime - static_cast<Real>(mp0) / n) <= kIntegerEps;
    if (exact && !(m0 % n == 0 && mp0 % n == 0)) return {m0, mp0};
    if (!lattice_conflict(lambda, lambda_prime, m0, mp0, n)) return {m0, mp0};

    // both bracketing integers satisfy the 1/n bound, so a +-1 shift in
    // either coordinate always resolves the conflict
    Real best_dist = std::numeric_limits<Real>::max();
    std::pair<long, long> best{m0, mp0};
    bool found = false;
    for (long dm = -1; dm <= 1; ++dm) {
        for (long dmp = -1; dmp <= 1; ++dmp) {
            if (dm == 0 && dmp == 0) continue;
            const long mm = m0 + dm;
            const long mmp = mp0 + dmp;
            if (std::abs(static_cast<Real>(mm) / n - lambda) > 1.0 / n + kIntegerEps)
                continue;
            if (std::abs(static_cast<Real>(mmp) / n - lambda_prime) >
                1.0 / n + kIntegerEps)
                continue;
            if (lattice_conflict(lambda, lambda_prime, mm, mmp, n)) continue;
            const Real dist =
                std::hypot(static_cast<Real>(mm) / n - lambda,
                           static_cast<Real>(mmp) / n - lambda_prime);
            if (dist < best_dist) {
                best_dist = dist;
                best = {mm, mmp};
                found = true;
            }
        }
    }
    if (!found)
        throw numeric_error(
            "no admissible lattice point in the +-1 neighborhood", 0.0);
    return best;
}

ApproxResult approximate_tuple(const EndpointTuple& t, int n, Real cert_tol) {
    if (n < 2) throw domain_error("approximate_tuple requires n >= 2");
    const EndpointTuple canon = t.canonical ? t : canonical_order(t).tuple;
    const Modulus mod = modulus_from_tuple(canon);
    const LatticeCoord rho = rho_from_tuple(canon, mod);

    ApproxResult res;

    const Real lam_hit = std::abs(rho.lambda * n - std::round(rho.lambda * n));
    const Real lamp_hit =
        std::abs(rho.lambda_prime * n - std::round(rho.lambda_prime * n));
    if (lam_hit <= kExactHitEps * n && lamp_hit <= kExactHitEps * n) {
        // already on the lattice: echo the endpoints verbatim
        res.a2_tilde = canon.a2;
        res.a3_tilde = canon.a3;
        res.m = std::lround(rho.lambda * n);
        res.m_prime = std::lround(rho.lambda_prime * n);
        res.tuple = canon;
        res.exact_hit = true;
        res.cert = is_tn_tuple(canon, n, cert_tol);
        return res;
    }

    const auto [m, m_prime] =
        nearest_lattice(rho.lambda, rho.lambda_prime, n, mod);
    const Complex rho_t = (static_cast<Real>(m) / n) * mod.K +
                          Complex(0, 1) * (static_cast<Real>(m_prime) / n) *
                              mod.Kprime;
    const JacobiValues jv = jacobi_fns(rho_t, mod);
    const Complex sn2 = jv.sn * jv.sn;

    const MoebiusParams mp = moebius_params(canon, mod);
    res.a2_tilde = canon.a4 - (canon.a4 - canon.a1) * sn2;
    const Complex pole_gap = res.a2_tilde + mp.A3;
    if (std::abs(pole_gap) <
        1e-14 * (std::abs(res.a2_tilde) + std::abs(mp.A3)))
        throw numeric_error(
            "approximated a2 hit the Moebius pole despite exclusion rule",
            std::abs(pole_gap));
    res.a3_tilde = mp.A1 * (res.a2_tilde + mp.A2) / pole_gap;
    res.m = m;
    res.m_prime = m_prime;
    res.tuple = EndpointTuple{canon.a1, res.a2_tilde, res.a3_tilde, canon.a4,
                              true};
    res.exact_hit = false;
    res.cert = is_tn_tuple(res.tuple, n, cert_tol);
    return res;
}

ErrorBoundReport error_bounds(const EndpointTuple& t,
                              const BoundsOptions& opt) {
    const EndpointTuple canon = t.canonical ? t : canonical_order(t).tuple;
    const Modulus mod = modulus_from_tuple(canon);
    const LatticeCoord rho = rho_from_tuple(canon, mod);
    const Real lambda = rho.lambda;
    const Real lambda_prime = rho.lambda_prime;

    ErrorBoundReport rep;
    const Real K_sum = std::abs(mod.K) + std::abs(mod.Kprime);
    rep.n1 = (2.0 / pi) * K_sum;

    // smallest box half-width 1/n2 that excludes the six special points
    // (0,0), (1,0), (0,+-1), (1,+-1) in lattice coordinates
    const std::array<std::pair<Real, Real>, 6> corners = {
        {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}, {1.0, 1.0},
         {1.0, -1.0}}};
    Real min_cheb = std::numeric_limits<Real>::max();
    for (const auto& [cx, cy] : corners)
        min_cheb = std::min(min_cheb,
                            std::max(std::abs(cx - lambda),
                                     std::abs(cy - lambda_prime)));
    if (min_cheb <= kIntegerEps)
        throw degeneracy_error(
            "lattice coordinates sit on an excluded corner");
    int n2 = 2;
    while (1.0 / n2 >= min_cheb) ++n2;
    rep.n2 = n2;

    const GridExtrema ex =
        box_extrema(mod, lambda - 1.0 / n2, lambda + 1.0 / n2,
                    lambda_prime - 1.0 / n2, lambda_prime + 1.0 / n2,
                    opt.grid, opt.refine_levels);
    rep.s_star = ex.s_max * opt.safety;
    rep.c_star = ex.c_max * opt.safety;
    rep.d_star = ex.d_max * opt.safety;
    rep.s_star_star = ex.s2_min / opt.safety;
    if (rep.s_star_star <= 0.0)
        throw numeric_error("sn^2 meets 1/k^2 inside the exclusion box",
                            rep.s_star_star);

    rep.n3 = (2.0 * std::sqrt(2.0) * rep.s_star / pi) * K_sum;
    rep.N = static_cast<int>(
        std::ceil(std::max({rep.n1, static_cast<Real>(rep.n2), rep.n3})));

    const Real a41 = std::abs(canon.a4 - canon.a1);
    rep.C1 = (16.0 / pi) * K_sum * a41 * rep.s_star * rep.c_star * rep.d_star;

    const MoebiusParams mp = moebius_params(canon, mod);
    const Real denom =
        std::abs(canon.a2 + mp.A3) * a41 * rep.s_star_star;
    if (denom <= 0.0)
        throw degeneracy_error("a2 sits on the Moebius pole");
    rep.C2 = rep.C1 * std::abs(mp.A1) * std::abs(mp.A2 - mp.A3) / denom;

    // measured difference-formula amplification at the certification
    // threshold
    {
        const int n = std::max(rep.N, 2);
        const auto [m, m_prime] =
            nearest_lattice(lambda, lambda_prime, n, mod);
        const Complex rho_t = (static_cast<Real>(m) / n) * mod.K +
                              Complex(0, 1) *
                                  (static_cast<Real>(m_prime) / n) *
                                  mod.Kprime;
        const Complex half_sum = 0.5 * (rho.rho + rho_t);
        const Complex half_diff = 0.5 * (rho.rho - rho_t);
        const JacobiValues s = jacobi_fns(rho.rho, mod);
        const JacobiValues st = jacobi_fns(rho_t, mod);
        const JacobiValues hs = jacobi_fns(half_sum, mod);
        const JacobiValues hd = jacobi_fns(half_diff, mod);
        const Complex denomB =
            Complex(1.0) -
            mod.k2() * hs.sn * hs.sn * hd.sn * hd.sn;
        rep.B_observed = std::abs(s.sn + st.sn) *
                         std::abs(2.0 * hs.cn * hs.dn) / std::abs(denomB);
    }
    return rep;
}

}  // namespace twoarc
