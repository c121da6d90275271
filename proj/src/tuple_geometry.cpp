#include "twoarc/tuple_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace twoarc {

namespace {

Complex cross_ratio_k2(const std::array<Complex, 4>& a) {
    return (a[3] - a[0]) * (a[2] - a[1]) / ((a[3] - a[1]) * (a[2] - a[0]));
}

bool ordering_ok(const std::array<Complex, 4>& a) {
    const Real lhs = std::abs(a[3] - a[0]) * std::abs(a[2] - a[1]);
    const Real rhs = std::abs(a[3] - a[1]) * std::abs(a[2] - a[0]);
    if (lhs > rhs) return false;
    const Complex k2 = cross_ratio_k2(a);
    return !(k2.imag() == 0.0 && k2.real() < 0.0);
}

}  // namespace

void validate_distinct(const EndpointTuple& t, Real separation_floor) {
    const auto a = t.points();
    Real scale = 0.0;
    for (const Complex& z : a) scale = std::max(scale, std::abs(z));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(a[static_cast<std::size_t>(i)] -
                         a[static_cast<std::size_t>(j)]) <=
                separation_floor * std::max(1.0, scale))
                throw degeneracy_error("endpoints are not pairwise distinct");
}

CanonicalResult canonical_order(const EndpointTuple& t, Real separation_floor) {
    validate_distinct(t, separation_floor);
    const auto pts = t.points();

    std::array<int, 4> idx = {0, 1, 2, 3};
    // identity first, then lexicographic permutation order
    do {
        std::array<Complex, 4> a;
        for (int i = 0; i < 4; ++i)
            a[static_cast<std::size_t>(i)] =
                pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        if (ordering_ok(a)) {
            CanonicalResult res;
            res.tuple = EndpointTuple{a[0], a[1], a[2], a[3], true};
            res.perm = idx;
            return res;
        }
    } while (std::next_permutation(idx.begin(), idx.end()));

    throw canonicalization_error(
        "no reordering keeps k^2 off the negative real axis");
}

Modulus modulus_from_tuple(const EndpointTuple& t) {
    validate_distinct(t);
    if (!t.canonical)
        throw domain_error("modulus_from_tuple expects a canonical tuple");
    const auto a = t.points();
    const Complex denom = (a[3] - a[1]) * (a[2] - a[0]);
    const Complex k2 = (a[3] - a[0]) * (a[2] - a[1]) / denom;

    if (std::abs(k2) < 1e-12 || std::abs(k2 - Complex(1.0)) < 1e-12)
        throw degeneracy_error("collapsed endpoints: k^2 at 0 or 1");
    if (k2.imag() == 0.0 && k2.real() < 0.0)
        throw canonicalization_error("k^2 on the negative real axis");

    const Complex k = std::sqrt(k2);  // principal: Re >= 0
    Modulus m = complete_integrals(k);

    const Complex kp2_direct = (a[3] - a[2]) * (a[1] - a[0]) / denom;
    if (std::abs(m.kprime * m.kprime - kp2_direct) >
        1e-10 * (1.0 + std::abs(kp2_direct)))
        throw numeric_error("complementary modulus cross-check failed",
                            std::abs(m.kprime * m.kprime - kp2_direct));
    return m;
}

LatticeCoord rho_from_tuple(const EndpointTuple& t, const Modulus& m) {
    validate_distinct(t);
    const Complex w = (t.a4 - t.a2) / (t.a4 - t.a1);
    const LatticeCoord rho = inverse_sn2(w, m);

    // corners of P correspond to coincident endpoints
    const Real corner_eps = 1e-12;
    const auto near_int = [corner_eps](Real x) {
        return std::abs(x - std::round(x)) < corner_eps;
    };
    if (near_int(rho.lambda) && near_int(rho.lambda_prime))
        throw degeneracy_error(
            "rho landed on a corner of the parallelogram despite distinct "
            "endpoints");
    return rho;
}

TupleCertificate is_tn_tuple(const EndpointTuple& t, int n, Real tol) {
    if (n < 2) throw domain_error("is_tn_tuple requires n >= 2");
    if (tol <= 0.0) throw domain_error("is_tn_tuple requires tol > 0");

    const EndpointTuple canon =
        t.canonical ? t : canonical_order(t).tuple;
    const Modulus m = modulus_from_tuple(canon);
    const LatticeCoord rho = rho_from_tuple(canon, m);

    TupleCertificate cert;
    cert.n = n;
    cert.m = std::lround(n * rho.lambda);
    cert.m_prime = std::lround(n * rho.lambda_prime);
    cert.lambda_residual =
        std::abs(rho.lambda - static_cast<Real>(cert.m) / n);
    cert.lambda_prime_residual =
        std::abs(rho.lambda_prime - static_cast<Real>(cert.m_prime) / n);
    cert.accepted =
        std::max(cert.lambda_residual, cert.lambda_prime_residual) <= tol;
    return cert;
}

}  // namespace twoarc
