#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "twoarc/density.hpp"

using namespace twoarc;

namespace {

const EndpointTuple kSymmetric{Complex(-1, 0), Complex(-0.5, 0),
                               Complex(0.5, 0), Complex(1, 0), false};

Modulus symmetric_modulus() {
    return modulus_from_tuple(canonical_order(kSymmetric).tuple);
}

}  // namespace

TEST_CASE("nearest lattice point: plain rounding") {
    const Modulus m = symmetric_modulus();
    {
        const auto [mm, mp] = nearest_lattice(0.5, 0.0, 4, m);
        CHECK(mm == 2);
        CHECK(mp == 0);
    }
    {
        const auto [mm, mp] = nearest_lattice(0.30, 0.52, 10, m);
        CHECK(mm == 3);
        CHECK(mp == 5);
    }
}

TEST_CASE("nearest lattice point: tie rounds away from zero") {
    const Modulus m = symmetric_modulus();
    // n*lambda = 0.5 exactly
    const auto [mm, mp] = nearest_lattice(0.25, 0.1, 2, m);
    CHECK(mm == 1);
    CHECK(mp == 0);
    CHECK(std::abs(0.5 * mm - 0.25) <= 0.5);
}

TEST_CASE("nearest lattice point avoids corner equivalents") {
    const Modulus m = symmetric_modulus();
    // plain rounding would give (0, n): a corner image where sn^2 degenerates
    const auto [mm, mp] = nearest_lattice(0.004, 0.996, 5, m);
    const bool corner = (mm % 5 == 0) && (mp % 5 == 0);
    CHECK_FALSE(corner);
    CHECK(std::abs(static_cast<Real>(mm) / 5 - 0.004) <= 0.2 + 1e-12);
    CHECK(std::abs(static_cast<Real>(mp) / 5 - 0.996) <= 0.2 + 1e-12);
}

TEST_CASE("rounding property over random input") {
    testing::Sampler smp(11);
    const Modulus m = symmetric_modulus();
    for (int trial = 0; trial < 200; ++trial) {
        const Real lambda = smp.uniform(0.0, 1.0);
        const Real lp = smp.uniform(-1.0, 1.0);
        const int n = 2 + static_cast<int>(smp.uniform(0.0, 200.0));
        const auto [mm, mp] = nearest_lattice(lambda, lp, n, m);
        CHECK(std::abs(static_cast<Real>(mm) / n - lambda) <= 1.0 / n + 1e-12);
        CHECK(std::abs(static_cast<Real>(mp) / n - lp) <= 1.0 / n + 1e-12);
    }
}

TEST_CASE("pole avoidance of the chosen lattice point") {
    testing::Sampler smp(23);
    int done = 0;
    while (done < 40) {
        const EndpointTuple t = canonical_order(smp.random_tuple()).tuple;
        const Modulus m = modulus_from_tuple(t);
        const LatticeCoord rho = rho_from_tuple(t, m);
        const int n = 3 + static_cast<int>(smp.uniform(0.0, 40.0));
        const auto [mm, mp] = nearest_lattice(rho.lambda, rho.lambda_prime,
                                              n, m);
        const Complex rho_t =
            (static_cast<Real>(mm) / n) * m.K +
            Complex(0, 1) * (static_cast<Real>(mp) / n) * m.Kprime;
        const Real floor =
            1e-6 * std::min(std::abs(m.K), std::abs(m.Kprime));
        for (const Complex u :
             {rho.rho + rho_t, rho.rho - rho_t, 0.5 * (rho.rho + rho_t),
              0.5 * (rho.rho - rho_t)})
            CHECK(pole_distance(u, m) > floor);
        ++done;
    }
}

TEST_CASE("approximation: already-certified input comes back verbatim") {
    const ApproxResult res = approximate_tuple(kSymmetric, 4);
    CHECK(res.exact_hit);
    const EndpointTuple canon = canonical_order(kSymmetric).tuple;
    CHECK(res.a2_tilde == canon.a2);
    CHECK(res.a3_tilde == canon.a3);
    CHECK(res.cert.accepted);
}

TEST_CASE("approximation of the symmetric tuple at n = 5") {
    // lambda = 1/2: tie between 2/5 and 3/5 resolved away from zero
    const ApproxResult res = approximate_tuple(kSymmetric, 5);
    CHECK(res.m == 3);
    CHECK(res.m_prime == 0);
    CHECK(std::abs(res.a2_tilde.imag()) < 1e-12);
    CHECK(res.a2_tilde.real() > -1.0);
    CHECK(res.a2_tilde.real() < -0.5);
    CHECK(res.cert.accepted);
    CHECK(is_tn_tuple(res.tuple, 5, 1e-9).accepted);
}

TEST_CASE("error bounds are positive with ordered thresholds") {
    const ErrorBoundReport rep =
        error_bounds(canonical_order(kSymmetric).tuple);
    CHECK(rep.C1 > 0.0);
    CHECK(rep.C2 > 0.0);
    CHECK(rep.s_star > 0.0);
    CHECK(rep.c_star > 0.0);
    CHECK(rep.d_star > 0.0);
    CHECK(rep.s_star_star > 0.0);
    CHECK(rep.n1 > 0.0);
    CHECK(rep.n2 >= 2);
    CHECK(rep.N >= static_cast<int>(std::ceil(rep.n1)));
    CHECK(rep.N >= rep.n2);
    CHECK(rep.N >= static_cast<int>(std::ceil(rep.n3)));
    CHECK(std::isfinite(rep.B_observed));
}

TEST_CASE("grid refinement consistency of the extrema") {
    const EndpointTuple t = canonical_order(kSymmetric).tuple;
    BoundsOptions coarse;
    coarse.grid = 64;
    BoundsOptions fine;
    fine.grid = 128;
    const ErrorBoundReport a = error_bounds(t, coarse);
    const ErrorBoundReport b = error_bounds(t, fine);
    CHECK(std::abs(a.s_star - b.s_star) < 0.01 * b.s_star);
    CHECK(std::abs(a.c_star - b.c_star) < 0.01 * b.c_star);
    CHECK(std::abs(a.d_star - b.d_star) < 0.01 * b.d_star);
    CHECK(std::abs(a.s_star_star - b.s_star_star) < 0.01 * b.s_star_star);
}

TEST_CASE("certified bound on the symmetric tuple across the sweep") {
    const EndpointTuple t = canonical_order(kSymmetric).tuple;
    const ErrorBoundReport rep = error_bounds(t);
    for (int n = std::max(rep.N, 2); n <= 256; n *= 2) {
        const ApproxResult res = approximate_tuple(t, n);
        if (res.exact_hit) continue;
        CHECK(n * std::abs(t.a2 - res.a2_tilde) <= rep.C1);
        CHECK(n * std::abs(t.a3 - res.a3_tilde) <= rep.C2);
    }
}

TEST_CASE("certified bound property over random tuples") {
    testing::Sampler smp(4096);
    int done = 0;
    while (done < 12) {
        const EndpointTuple t = canonical_order(smp.random_tuple()).tuple;
        ErrorBoundReport rep;
        try {
            rep = error_bounds(t);
        } catch (const degeneracy_error&) {
            continue;
        }
        if (rep.N > 256) continue;  // desk scale
        bool used = false;
        for (int n = 8; n <= 256; n *= 2) {
            if (n < rep.N) continue;
            const ApproxResult res = approximate_tuple(t, n);
            if (res.exact_hit) continue;
            CHECK(n * std::abs(t.a2 - res.a2_tilde) <= rep.C1);
            CHECK(n * std::abs(t.a3 - res.a3_tilde) <= rep.C2);
            CHECK(res.cert.accepted);
            used = true;
        }
        if (used) ++done;
    }
}

TEST_CASE("proof-chain bound: products of half-point sn values stay small") {
    testing::Sampler smp(512);
    int done = 0;
    while (done < 10) {
        const EndpointTuple t = canonical_order(smp.random_tuple()).tuple;
        ErrorBoundReport rep;
        try {
            rep = error_bounds(t);
        } catch (const degeneracy_error&) {
            continue;
        }
        if (rep.N > 200) continue;
        const Modulus m = modulus_from_tuple(t);
        const LatticeCoord rho = rho_from_tuple(t, m);
        const int n = std::max({static_cast<int>(std::ceil(rep.n3)), rep.n2,
                                static_cast<int>(std::ceil(rep.n1))});
        const auto [mm, mp] =
            nearest_lattice(rho.lambda, rho.lambda_prime, n, m);
        const Complex rho_t =
            (static_cast<Real>(mm) / n) * m.K +
            Complex(0, 1) * (static_cast<Real>(mp) / n) * m.Kprime;
        const JacobiValues hs = jacobi_fns(0.5 * (rho.rho + rho_t), m);
        const JacobiValues hd = jacobi_fns(0.5 * (rho.rho - rho_t), m);
        const Real prod = std::abs(m.k2()) * std::norm(hs.sn) *
                          std::norm(hd.sn);
        CHECK(prod <= 0.5 + 1e-9);
        // and the measured amplification honors the gridded extrema
        const JacobiValues s = jacobi_fns(rho.rho, m);
        const JacobiValues st = jacobi_fns(rho_t, m);
        const Real B = std::abs(s.sn + st.sn) *
                       std::abs(2.0 * hs.cn * hs.dn) /
                       std::abs(Complex(1.0) - m.k2() * hs.sn * hs.sn *
                                                   hd.sn * hd.sn);
        CHECK(B <= 8.0 * rep.s_star * rep.c_star * rep.d_star + 1e-9);
        ++done;
    }
}

TEST_CASE("Moebius parameters reproduce a3 from a2") {
    testing::Sampler smp(77);
    for (int trial = 0; trial < 20; ++trial) {
        const EndpointTuple t = canonical_order(smp.random_tuple()).tuple;
        const Modulus m = modulus_from_tuple(t);
        const MoebiusParams p = moebius_params(t, m);
        const Complex a3 = p.A1 * (t.a2 + p.A2) / (t.a2 + p.A3);
        CHECK(std::abs(a3 - t.a3) < 1e-9 * (1.0 + std::abs(t.a3)));
    }
}

TEST_CASE("degenerate corner coordinates are refused") {
    const Modulus m = symmetric_modulus();
    CHECK_THROWS_AS(nearest_lattice(0.5, 0.0, 1, m), domain_error);
}
