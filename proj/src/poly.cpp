#include "twoarc/poly.hpp"

#include <cmath>

namespace twoarc {

namespace {

// double-double helpers (error-free transforms, FMA-based products)
struct DD {
    Real hi = 0.0, lo = 0.0;
};

DD two_sum(Real a, Real b) {
    const Real s = a + b;
    const Real bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD two_prod(Real a, Real b) {
    const Real p = a * b;
    return {p, std::fma(a, b, -p)};
}

DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    const DD t = two_sum(s.hi, s.lo);
    return t;
}

DD dd_add(DD a, Real b) { return dd_add(a, DD{b, 0.0}); }

DD dd_mul(DD a, Real b) {
    DD p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return two_sum(p.hi, p.lo);
}

}  // namespace

ComplexVector poly_conv(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() == 0 || b.size() == 0)
        throw shape_error("empty coefficient vector in product");
    ComplexVector c = ComplexVector::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) c(i + j) += a(i) * b(j);
    return c;
}

ComplexVector poly_from_roots(std::span<const Complex> roots) {
    ComplexVector c(1);
    c(0) = Complex(1.0);
    for (const Complex& r : roots) {
        ComplexVector lin(2);
        lin << -r, Complex(1.0);
        c = poly_conv(c, lin);
    }
    return c;
}

ComplexVector poly_derivative(const ComplexVector& a) {
    if (a.size() == 0) throw shape_error("empty coefficient vector");
    if (a.size() == 1) return ComplexVector::Zero(1);
    ComplexVector d(a.size() - 1);
    for (Eigen::Index i = 1; i < a.size(); ++i)
        d(i - 1) = static_cast<Real>(i) * a(i);
    return d;
}

Complex eval_poly(const ComplexVector& coeffs, Complex z) {
    if (coeffs.size() == 0) throw shape_error("empty coefficient vector");
    const Real zr = z.real(), zi = z.imag();
    DD ar, ai;  // accumulator
    for (Eigen::Index j = coeffs.size() - 1; j >= 0; --j) {
        // (ar + i ai) * z
        const DD prr = dd_mul(ar, zr);
        const DD pii = dd_mul(ai, zi);
        const DD pri = dd_mul(ar, zi);
        const DD pir = dd_mul(ai, zr);
        ar = dd_add(prr, DD{-pii.hi, -pii.lo});
        ai = dd_add(pri, pir);
        ar = dd_add(ar, coeffs(j).real());
        ai = dd_add(ai, coeffs(j).imag());
    }
    return {ar.hi + ar.lo, ai.hi + ai.lo};
}

std::pair<Complex, Complex> eval_poly_deriv(const ComplexVector& coeffs,
                                            Complex z) {
    if (coeffs.size() == 0) throw shape_error("empty coefficient vector");
    Complex p(0.0), dp(0.0);
    for (Eigen::Index j = coeffs.size() - 1; j >= 0; --j) {
        dp = dp * z + p;
        p = p * z + coeffs(j);
    }
    return {p, dp};
}

ComplexVector chebyshev_t(int n) {
    if (n < 0) throw shape_error("negative Chebyshev degree");
    ComplexVector t0 = ComplexVector::Zero(1);
    t0(0) = 1.0;
    if (n == 0) return t0;
    ComplexVector t1 = ComplexVector::Zero(2);
    t1(1) = 1.0;
    for (int i = 2; i <= n; ++i) {
        ComplexVector t2 = ComplexVector::Zero(i + 1);
        t2.segment(1, i) = 2.0 * t1;
        t2.head(t0.size()) -= t0;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    return t1;
}

ComplexVector chebyshev_u(int n) {
    if (n < 0) throw shape_error("negative Chebyshev degree");
    ComplexVector u0 = ComplexVector::Zero(1);
    u0(0) = 1.0;
    if (n == 0) return u0;
    ComplexVector u1 = ComplexVector::Zero(2);
    u1(1) = 2.0;
    for (int i = 2; i <= n; ++i) {
        ComplexVector u2 = ComplexVector::Zero(i + 1);
        u2.segment(1, i) = 2.0 * u1;
        u2.head(u0.size()) -= u0;
        u0 = std::move(u1);
        u1 = std::move(u2);
    }
    return u1;
}

ComplexVector poly_compose(const ComplexVector& outer,
                           const ComplexVector& inner) {
    if (outer.size() == 0 || inner.size() == 0)
        throw shape_error("empty coefficient vector in composition");
    // Horner in the inner polynomial
    ComplexVector acc(1);
    acc(0) = outer(outer.size() - 1);
    for (Eigen::Index j = outer.size() - 2; j >= 0; --j) {
        acc = poly_conv(acc, inner);
        acc(0) += outer(j);
    }
    return acc;
}

ComplexVector poly_linear_substitute(const ComplexVector& p, Complex alpha,
                                     Complex beta) {
    ComplexVector lin(2);
    lin << beta, alpha;
    return poly_compose(p, lin);
}

}  // namespace twoarc
