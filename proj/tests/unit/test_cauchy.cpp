#include "check_error.hpp"
#include "support.hpp"

#include "cnduality/cauchy.hpp"

#include <algorithm>

using namespace cnduality;
using testkit::Gen;
using testkit::I;

namespace {

CxVector vec(std::initializer_list<cplx> xs) {
    CxVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (const cplx x : xs) v(k++) = x;
    return v;
}

const CxVector kRefX = vec({-I / 2.0, I / 2.0});

// Generic points away from the poles: imaginary parts spread apart, real
// parts small so that 1 + x_k - x_l and (x_k - x_l)^2 - 1 stay clear of zero.
CxVector spread_point(Gen& gen, int N) {
    RealVector im = gen.chamber(N, 0.1, 0.3, 0.8);
    for (int k = 0; k < N; ++k) im(k) -= 0.5 * im(0);
    std::shuffle(im.data(), im.data() + N, gen.rng);
    CxVector x(N);
    for (int k = 0; k < N; ++k) x(k) = cplx(gen.uni(-0.2, 0.2), im(k));
    return x;
}

// C-symmetric (h, -h) with h purely imaginary and spread.
CauchyContext c_symmetric_point(Gen& gen, int n) {
    const RealVector lam = gen.chamber(n, 0.3, 0.4, 1.0);
    const double g = gen.sgn() * gen.uni(0.3, 1.5);
    CxVector h(n);
    for (int a = 0; a < n; ++a) h(a) = lam(a) / (2.0 * I * g);
    return CauchyContext::c_symmetric_from_half(h);
}

cplx direct_w(const CxVector& x, Eigen::Index j) {
    cplx w = 1.0;
    for (Eigen::Index k = 0; k < x.size(); ++k)
        if (k != j) w *= (1.0 + x(j) - x(k)) / (x(j) - x(k));
    return w;
}

}  // namespace

TEST_CASE("cauchy_matrix examples") {
    const CxMatrix M = cauchy_matrix(CauchyContext(kRefX));
    CHECK(std::abs(M(0, 0) - 1.0) == 0.0);
    CHECK(std::abs(M(1, 1) - 1.0) == 0.0);
    CHECK(std::abs(M(0, 1) - 1.0 / (1.0 - I)) < 1e-16);
    CHECK(std::abs(M(1, 0) - 1.0 / (1.0 + I)) < 1e-16);

    Gen gen(1);
    const CxMatrix G = cauchy_matrix(CauchyContext(spread_point(gen, 5)));
    for (int k = 0; k < 5; ++k) CHECK(G(k, k) == cplx(1.0));

    // x = 0 is allowed for the matrix itself even though w is undefined there.
    const CxMatrix Z = cauchy_matrix(CauchyContext(CxVector::Zero(3)));
    CHECK((Z - CxMatrix::Ones(3, 3)).norm() == 0.0);

    CHECK_ERROR_KIND(cauchy_matrix(CauchyContext(vec({0.0, 1.0}))), ErrorKind::PoleError);
}

TEST_CASE("w_values examples") {
    const CxVector w = w_values(CauchyContext(kRefX));
    CHECK(std::abs(w(0) - (1.0 + I)) < 1e-15);
    CHECK(std::abs(w(1) - (1.0 - I)) < 1e-15);
    CHECK(std::abs(w.sum() - 2.0) < 1e-15);
    CHECK_ERROR_KIND(w_values(CauchyContext(vec({0.3 * I, 0.3 * I}))), ErrorKind::PoleError);

    // C-symmetric x: w_{n+a}(x) = w_a(-x).
    Gen gen(2);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = gen.pick(1, 5);
        const CauchyContext ctx = c_symmetric_point(gen, n);
        const CxVector wx = w_values(ctx);
        const CxVector wm = w_values(ctx.negated());
        for (int a = 0; a < n; ++a) CHECK(std::abs(wx(n + a) - wm(a)) <= 1e-10 * (1.0 + std::abs(wm(a))));
    }
}

TEST_CASE("cauchy_det examples") {
    CHECK(std::abs(cauchy_det(CauchyContext(kRefX)) - 0.5) < 1e-16);
    CHECK(std::abs(cauchy_det(CauchyContext(vec({2.0, 0.0}))) - 4.0 / 3.0) < 1e-15);
    CHECK(cauchy_det(CauchyContext(vec({0.7 * I}))) == cplx(1.0));
    CHECK_ERROR_KIND(cauchy_det(CauchyContext(vec({0.5, -0.5}))), ErrorKind::SingularCauchy);
}

TEST_CASE("cauchy_inverse examples") {
    const CauchyContext ref(kRefX);
    CHECK((cauchy_inverse(ref) * cauchy_matrix(ref) - CxMatrix::Identity(2, 2)).norm() < 1e-12);
    const CxMatrix one = cauchy_inverse(CauchyContext(vec({0.4 * I})));
    CHECK(one.rows() == 1);
    CHECK(std::abs(one(0, 0) - 1.0) < 1e-15);

    Gen gen(3);
    for (int trial = 0; trial < 30; ++trial) {
        const int N = gen.pick(2, 6);
        CxVector x(N);
        RealVector r = gen.chamber(N, 0.1, 0.2, 0.6);
        for (int k = 0; k < N; ++k) x(k) = 0.3 * r(k) + 0.05;  // real, distinct, gaps below 1
        const CauchyContext ctx(x);
        CHECK(identity_suite(ctx).inverse <= 1e-9);
        // Rounded to double, the product can do no better than eps ||C|| ||C^-1||.
        const CxMatrix inv = cauchy_inverse(ctx), cm = cauchy_matrix(ctx);
        const double floor = 1e-16 * N * inv.norm() * cm.norm();
        CHECK((inv * cm - CxMatrix::Identity(N, N)).norm() <= std::max(1e-9, 10.0 * floor));
    }
}

TEST_CASE("partial_fraction_check examples") {
    auto pf = partial_fraction_check(vec({0.0}), vec({1.0}), 3.0);
    CHECK(std::abs(pf.lhs - 1.5) < 1e-15);
    CHECK(std::abs(pf.rhs - 1.5) < 1e-15);
    pf = partial_fraction_check(CxVector(0), vec({0.0}), 2.0);
    CHECK(std::abs(pf.lhs - 0.5) < 1e-15);
    CHECK(std::abs(pf.rhs - 0.5) < 1e-15);
    CHECK_ERROR_KIND(partial_fraction_check(vec({0.0}), vec({1.0, 1.0}), 3.0), ErrorKind::PoleError);

    Gen gen(4);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = gen.pick(1, 6);
        const int M = gen.pick(0, N);
        const CxVector alphas = gen.cxv(M);
        const CxVector betas = spread_point(gen, N);
        const cplx z = cplx(gen.uni(2.0, 3.0), gen.uni(-1.0, 1.0));
        const auto res = partial_fraction_check(alphas, betas, z);
        CHECK(std::abs(res.lhs - res.rhs) <= 1e-9 * (1.0 + std::abs(res.lhs)));
    }
}

TEST_CASE("identity_suite at the reference point") {
    const IdentityReport rep = identity_suite(CauchyContext(kRefX, true));
    // By hand: w_1/(1 + 2x_1) + w_2/(1 + 2x_2) = (1+i)/(1-i) + (1-i)/(1+i) = i - i = 0.
    REQUIRE(rep.w_half_sum.has_value());
    CHECK(*rep.w_half_sum < 1e-15);
    CHECK(rep.w_sum_against_cauchy < 1e-15);
    CHECK(rep.max_residual() < 1e-14);
}

TEST_CASE("property: determinant against LU, trace of W, identities") {
    Gen gen(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = gen.pick(1, 8);
        const CauchyContext ctx(spread_point(gen, N));
        const cplx lu = cauchy_matrix(ctx).determinant();
        CHECK(std::abs(cauchy_det(ctx) - lu) <= 1e-9 * std::abs(lu));

        const CxVector w = w_values(ctx);
        for (int j = 0; j < N; ++j) CHECK(std::abs(w(j) - direct_w(ctx.x(), j)) <= 1e-12 * std::abs(w(j)));
        CHECK(std::abs(w.sum() - double(N)) <= 1e-8);

        const IdentityReport rep = identity_suite(ctx);
        CHECK(rep.w_sum_against_cauchy <= 1e-9);
        CHECK(rep.inverse <= 1e-9);
        CHECK_FALSE(rep.involution.has_value());
    }
}

TEST_CASE("property: C-symmetric identities") {
    Gen gen(6);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = gen.pick(1, 5);
        const CauchyContext ctx = c_symmetric_point(gen, n);
        const IdentityReport rep = identity_suite(ctx);
        REQUIRE(rep.involution.has_value());
        CHECK(*rep.w_half_sum <= 1e-9);
        CHECK(*rep.w_half_shift <= 1e-9);
        CHECK(*rep.cwc <= 1e-9);
        CHECK(*rep.ccc <= 1e-9);
        CHECK(*rep.involution <= 1e-9);
        CHECK(*rep.c_type_w <= 1e-10);
        CHECK(rep.max_residual() <= 1e-9);
        CHECK((w_values_c_type(ctx) - w_values(ctx)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}
