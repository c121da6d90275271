#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "twoarc/density.hpp"
#include "twoarc/tuple_geometry.hpp"

using namespace twoarc;

namespace {

const EndpointTuple kSymmetric{Complex(-1, 0), Complex(-0.5, 0),
                               Complex(0.5, 0), Complex(1, 0), false};

// Synthesize (a1, a2, a3, a4) from modulus and lattice data; this inverts
// the definitions used by modulus_from_tuple/rho_from_tuple, so the pair
// acts as a forward oracle for both.
EndpointTuple synthesize(const Modulus& m, Real lambda, Real lambda_prime,
                         Complex a1, Complex a4) {
    const Complex rho = lambda * m.K + Complex(0, 1) * lambda_prime * m.Kprime;
    const JacobiValues jv = jacobi_fns(rho, m);
    const Complex a2 = a4 - (a4 - a1) * jv.sn * jv.sn;
    const Complex k2 = m.k2();
    const Complex kp2 = m.kprime * m.kprime;
    const Complex A1 = (a4 - kp2 * a1) / k2;
    const Complex A2 = k2 * a1 * a4 / (kp2 * a1 - a4);
    const Complex A3 = (kp2 * a4 - a1) / k2;
    const Complex a3 = A1 * (a2 + A2) / (a2 + A3);
    return EndpointTuple{a1, a2, a3, a4, true};
}

}  // namespace

TEST_CASE("canonical order keeps admissible input unchanged") {
    // 2*1 = 2 <= (3/2)(3/2) = 2.25
    const CanonicalResult res = canonical_order(kSymmetric);
    CHECK(res.perm == std::array<int, 4>{0, 1, 2, 3});
    CHECK(res.tuple.a1 == kSymmetric.a1);
    CHECK(res.tuple.a4 == kSymmetric.a4);
    CHECK(res.tuple.canonical);
}

TEST_CASE("canonical order fixes a bad labeling and records the permutation") {
    const EndpointTuple scrambled{Complex(0.5, 0), Complex(1, 0),
                                  Complex(-1, 0), Complex(-0.5, 0), false};
    const CanonicalResult res = canonical_order(scrambled);
    const auto a = res.tuple.points();
    const Real lhs = std::abs(a[3] - a[0]) * std::abs(a[2] - a[1]);
    const Real rhs = std::abs(a[3] - a[1]) * std::abs(a[2] - a[0]);
    CHECK(lhs <= rhs);
    for (int i = 0; i < 4; ++i)
        CHECK(res.tuple.point(i) ==
              scrambled.point(res.perm[static_cast<std::size_t>(i)]));
}

TEST_CASE("repeated points are rejected") {
    const EndpointTuple bad{Complex(-1, 0), Complex(-0.5, 0), Complex(0.5, 0),
                            Complex(-1, 0), false};
    CHECK_THROWS_AS(canonical_order(bad), degeneracy_error);
}

TEST_CASE("modulus from the symmetric tuple") {
    const Modulus m = modulus_from_tuple(kSymmetric.canonical
                                             ? kSymmetric
                                             : canonical_order(kSymmetric).tuple);
    // k^2 = 8/9 by direct cross-ratio arithmetic, k' ^2 = 1/9
    CHECK(std::abs(m.k - Complex(0.94280904158206337)) < 1e-14);
    CHECK(std::abs(m.k * m.k - Complex(8.0 / 9.0)) < 1e-14);
    CHECK(std::abs(m.kprime * m.kprime - Complex(1.0 / 9.0)) < 1e-12);
}

TEST_CASE("modulus of the symmetric family (-1,-c,c,1)") {
    for (const Real c : {0.3, 0.5, 0.8}) {
        const EndpointTuple t{Complex(-1, 0), Complex(-c, 0), Complex(c, 0),
                              Complex(1, 0), true};
        const Modulus m = modulus_from_tuple(t);
        const Real expected = 2.0 * std::sqrt(c) / (1.0 + c);
        CHECK(std::abs(m.k - Complex(expected)) < 1e-13);
    }
    // c = 0.8 frozen value
    const EndpointTuple t{Complex(-1, 0), Complex(-0.8, 0), Complex(0.8, 0),
                          Complex(1, 0), true};
    CHECK(std::abs(modulus_from_tuple(t).k - Complex(0.99380798999990653)) <
          1e-13);
}

TEST_CASE("collapsed endpoints raise a degeneracy") {
    // a2 == a1 forces k^2 = 1
    EndpointTuple t{Complex(-1, 0), Complex(-1, 0), Complex(0.5, 0),
                    Complex(1, 0), true};
    CHECK_THROWS_AS(modulus_from_tuple(t), degeneracy_error);
}

TEST_CASE("rho of the symmetric tuple sits at K/2") {
    // sn^2(K/2) = 1/(1+k') with k' = 1/3 gives w = 3/4 = (a4-a2)/(a4-a1)
    const EndpointTuple t = canonical_order(kSymmetric).tuple;
    const Modulus m = modulus_from_tuple(t);
    const LatticeCoord rho = rho_from_tuple(t, m);
    CHECK(rho.lambda == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(std::abs(rho.lambda_prime) < 1e-11);
}

TEST_CASE("rho round trips through synthesized tuples") {
    testing::Sampler smp(808);
    for (int trial = 0; trial < 30; ++trial) {
        const Modulus m = complete_integrals(smp.modulus_k());
        const auto [lambda, lp] = smp.lattice_point(0.06);
        const EndpointTuple t =
            synthesize(m, lambda, lp, smp.disk_point(), smp.disk_point());
        if (std::abs(t.a1 - t.a4) < 0.3) continue;
        const LatticeCoord rho = rho_from_tuple(t, m);
        CHECK(rho.lambda == doctest::Approx(lambda).epsilon(1e-8));
        CHECK(rho.lambda_prime == doctest::Approx(lp).epsilon(1e-8));
    }
}

TEST_CASE("certification: symmetric tuple at n = 4 and n = 3") {
    const TupleCertificate c4 = is_tn_tuple(kSymmetric, 4);
    CHECK(c4.accepted);
    CHECK(c4.m == 2);
    CHECK(c4.m_prime == 0);
    CHECK(c4.lambda_residual < 1e-11);

    const TupleCertificate c3 = is_tn_tuple(kSymmetric, 3);
    CHECK_FALSE(c3.accepted);  // 1/2 is not of the form m/3
    CHECK(c3.lambda_residual > 0.1);
}

TEST_CASE("central-symmetric quadruples are degree-2 tuples") {
    testing::Sampler smp(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const Complex p = smp.disk_point();
        const Complex q = smp.disk_point();
        if (std::abs(p - q) < 0.3 || std::abs(p + q) < 0.3 ||
            std::abs(p) < 0.2 || std::abs(q) < 0.2)
            continue;
        const EndpointTuple t{p, q, -q, -p, false};
        CHECK(is_tn_tuple(t, 2).accepted);
    }
}

TEST_CASE("synthesized lattice tuples are accepted") {
    testing::Sampler smp(2718);
    int done = 0;
    while (done < 100) {
        const Modulus m = complete_integrals(smp.modulus_k());
        const int n = 2 + static_cast<int>(smp.uniform(0.0, 510.0));
        const long mm = std::lround(smp.uniform(1.0, n - 1.0));
        const long mp = std::lround(smp.uniform(-n + 1.0, n - 1.0));
        const Real lambda = static_cast<Real>(mm) / n;
        const Real lp = static_cast<Real>(mp) / n;
        if (std::abs(lp) < 0.05 || lambda < 0.05 || lambda > 0.95 ||
            std::abs(lp) > 0.95)
            continue;
        const EndpointTuple t =
            synthesize(m, lambda, lp, Complex(-1, 0), Complex(1, 0));
        const TupleCertificate cert = is_tn_tuple(t, n, 1e-9);
        CHECK(cert.accepted);
        CHECK(cert.m == mm);
        CHECK(cert.m_prime == mp);
        ++done;
    }
}

TEST_CASE("non-lattice rho is rejected") {
    testing::Sampler smp(3141);
    int done = 0;
    while (done < 25) {
        const Modulus m = complete_integrals(smp.modulus_k());
        const int n = 2 + static_cast<int>(smp.uniform(0.0, 60.0));
        // an irrational-by-construction coordinate well off the lattice
        const Real lambda =
            (std::floor(smp.uniform(1.0, n - 1.0)) + 0.5 +
             0.31 * smp.uniform(0.1, 0.9)) / n;
        const Real lp = 0.37;
        if (lambda < 0.05 || lambda > 0.95) continue;
        const EndpointTuple t =
            synthesize(m, lambda, lp, Complex(-1, 0), Complex(1, 0));
        CHECK_FALSE(is_tn_tuple(t, n, 1e-9).accepted);
        ++done;
    }
}

TEST_CASE("acceptance is stable under relabeling") {
    testing::Sampler smp(606);
    int done = 0;
    while (done < 50) {
        const Modulus m = complete_integrals(smp.modulus_k());
        const int n = 3 + static_cast<int>(smp.uniform(0.0, 12.0));
        const long mm = 1 + static_cast<long>(smp.uniform(0.0, n - 2.0));
        const long mp = 1 + static_cast<long>(smp.uniform(0.0, n - 2.0));
        const EndpointTuple t = synthesize(m, static_cast<Real>(mm) / n,
                                           static_cast<Real>(mp) / n,
                                           Complex(-1, 0), Complex(1, 0));
        const bool base = is_tn_tuple(t, n, 1e-9).accepted;
        // shuffle the labels; canonicalization must undo it
        const EndpointTuple shuffled{t.a3, t.a1, t.a4, t.a2, false};
        try {
            CHECK(is_tn_tuple(shuffled, n, 1e-9).accepted == base);
            ++done;
        } catch (const degeneracy_error&) {
            // synthesized point collided with an endpoint; resample
        }
    }
}

TEST_CASE("approximated tuples keep the modulus of the original") {
    testing::Sampler smp(909);
    for (int trial = 0; trial < 10; ++trial) {
        const EndpointTuple t = canonical_order(smp.random_tuple()).tuple;
        const Modulus m0 = modulus_from_tuple(t);
        const ApproxResult ap = approximate_tuple(t, 64);
        const Modulus m1 = modulus_from_tuple(ap.tuple);
        CHECK(std::abs(m0.k - m1.k) < 1e-9);
    }
}

TEST_CASE("guard rails") {
    CHECK_THROWS_AS(is_tn_tuple(kSymmetric, 1), domain_error);
    CHECK_THROWS_AS(is_tn_tuple(kSymmetric, 4, 0.0), domain_error);
    EndpointTuple not_canon = kSymmetric;
    not_canon.canonical = false;
    CHECK_THROWS_AS(modulus_from_tuple(not_canon), domain_error);
}
