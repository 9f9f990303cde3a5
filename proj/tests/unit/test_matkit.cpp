#include "check_error.hpp"
#include "support.hpp"

#include "cnduality/matkit.hpp"

using namespace cnduality;
using testkit::Gen;
using testkit::I;

namespace {

CxMatrix m2(cplx a, cplx b, cplx c, cplx d) {
    CxMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

// Column equality up to a unit phase.
double phase_free_distance(const CxVector& u, const CxVector& v) {
    const cplx overlap = v.dot(u);
    const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
    return (u - phase * v).norm();
}

}  // namespace

TEST_CASE("build_C: block anti-diagonal identity") {
    CHECK((build_C(1) - m2(0, 1, 1, 0)).norm() == 0.0);
    const CxMatrix C2 = build_C(2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool one = (i == 0 && j == 2) || (i == 1 && j == 3) || (i == 2 && j == 0) || (i == 3 && j == 1);
            CHECK(C2(i, j) == cplx(one ? 1.0 : 0.0));
        }
    for (std::size_t n = 1; n <= 5; ++n) {
        const CxMatrix C = build_C(n);
        CHECK((C * C - CxMatrix::Identity(2 * n, 2 * n)).norm() == 0.0);
        CHECK((C.adjoint() - C).norm() == 0.0);
    }
    CHECK_ERROR_KIND(build_C(0), ErrorKind::InvalidDimension);
}

TEST_CASE("decompose_kp splits into anti-Hermitian and Hermitian parts") {
    const CxMatrix Y = m2(1, I, 0, -1);
    const auto parts = decompose_kp(Y);
    CHECK((parts.plus - m2(0, I / 2.0, I / 2.0, 0)).norm() < 1e-15);
    CHECK((parts.minus - m2(1, I / 2.0, -I / 2.0, -1)).norm() < 1e-15);

    Gen gen(11);
    const CxMatrix R = gen.cx(4, 4);
    const CxMatrix H = R + R.adjoint();
    const CxMatrix S = R - R.adjoint();
    CHECK(decompose_kp(H).plus.norm() == 0.0);
    CHECK((decompose_kp(H).minus - H).norm() == 0.0);
    CHECK((decompose_kp(S).plus - S).norm() == 0.0);
    CHECK(decompose_kp(S).minus.norm() == 0.0);
    CHECK((decompose_kp(R).plus + decompose_kp(R).minus - R).norm() < 1e-15);
}

TEST_CASE("eig_paired_p: worked examples") {
    SUBCASE("2x2 off-diagonal") {
        const auto ps = eig_paired_p(m2(0, I, -I, 0));
        REQUIRE(ps.positive_part.size() == 1);
        CHECK(ps.positive_part(0) == doctest::Approx(1.0).epsilon(1e-14));
        const double r = 1.0 / std::sqrt(2.0);
        CxVector v0(2), v1(2);
        v0 << I * r, r;
        v1 << r, I * r;
        CHECK(phase_free_distance(ps.frame.mat.col(0), v0) < 1e-12);
        CHECK(phase_free_distance(ps.frame.mat.col(1), v1) < 1e-12);
    }
    SUBCASE("already diagonal, n = 2") {
        RealVector d(2);
        d << 3.0, 1.0;
        CxMatrix X = CxMatrix::Zero(4, 4);
        X.diagonal() << 3.0, 1.0, -3.0, -1.0;
        const auto ps = eig_paired_p(X);
        CHECK((ps.positive_part - d).norm() < 1e-14);
        CHECK((ps.frame.mat.cwiseAbs() - RealVector::Ones(4).asDiagonal().toDenseMatrix()).norm() < 1e-14);
    }
    SUBCASE("paired diagonal returns the chamber vector") {
        Gen gen(3);
        for (int n = 1; n <= 4; ++n) {
            const RealVector lam = gen.chamber(n);
            CHECK((eig_paired_p(paired_diag(lam)).positive_part - lam).norm() < 1e-13);
        }
    }
    SUBCASE("zero eigenvalue is a regularity violation") {
        CHECK_ERROR_KIND(eig_paired_p(CxMatrix::Zero(2, 2)), ErrorKind::RegularityViolation);
    }
    SUBCASE("degenerate pair is a regularity violation") {
        CxMatrix X = CxMatrix::Zero(4, 4);
        X.diagonal() << 1.0, 1.0, -1.0, -1.0;
        CHECK_ERROR_KIND(eig_paired_p(X), ErrorKind::RegularityViolation);
    }
    SUBCASE("input outside p is rejected") {
        CHECK_ERROR_KIND(eig_paired_p(m2(1, 0, 0, 2)), ErrorKind::StructureViolation);
    }
}

TEST_CASE("eig_paired_expp: worked examples") {
    const double s2 = std::sqrt(2.0);
    const auto ps = eig_paired_expp(m2(s2, -I, I, s2));
    CHECK(ps.positive_part(0) == doctest::Approx(testkit::kRefQ).epsilon(1e-14));

    const auto diag = eig_paired_expp(m2(std::exp(2.0), 0, 0, std::exp(-2.0)));
    CHECK(diag.positive_part(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((diag.frame.mat.cwiseAbs() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);

    CHECK_ERROR_KIND(eig_paired_expp(CxMatrix::Identity(4, 4)), ErrorKind::RegularityViolation);
    CHECK_ERROR_KIND(eig_paired_expp(m2(-s2, I, -I, -s2)), ErrorKind::NotInExpP);
}

TEST_CASE("sqrt_posdef and expm examples") {
    const CxMatrix d = m2(4, 0, 0, 0.25);
    CHECK((sqrt_posdef(d) - m2(2, 0, 0, 0.5)).norm() < 1e-14);
    CHECK((sqrt_posdef(CxMatrix::Identity(4, 4)) - CxMatrix::Identity(4, 4)).norm() < 1e-14);
    const double s2 = std::sqrt(2.0);
    const CxMatrix A = m2(s2, -I, I, s2);
    const CxMatrix R = sqrt_posdef(A);
    CHECK((R * R - A).norm() < 1e-12);
    CHECK((R - R.adjoint()).norm() < 1e-14);
    CHECK_ERROR_KIND(sqrt_posdef(m2(1, 0, 0, -1)), ErrorKind::NotPositiveDefinite);

    CHECK((expm(CxMatrix::Zero(3, 3)) - CxMatrix::Identity(3, 3)).norm() == 0.0);
    CHECK((expm(m2(std::log(2.0), 0, 0, -std::log(2.0))) - m2(2, 0, 0, 0.5)).norm() < 1e-14);
    for (const double t : {-1.5, 0.3, 2.0}) {
        const CxMatrix J = m2(0, I, -I, 0);
        const CxMatrix expect = std::cosh(t) * CxMatrix::Identity(2, 2) + std::sinh(t) * J;
        CHECK((expm(t * J) - expect).norm() < 1e-12 * expect.norm());
    }
}

TEST_CASE("cartan_polar examples") {
    Gen gen(5);
    const CxMatrix k = testkit::unitary_exp(gen.in_k_algebra(2));
    auto parts = cartan_polar(k);
    CHECK((parts.pos - CxMatrix::Identity(4, 4)).norm() < 1e-12);
    CHECK((parts.uni - k).norm() < 1e-12);

    const double e = std::exp(1.0);
    const CxMatrix B = m2(e, 0, 0, 1.0 / e);
    parts = cartan_polar(B);
    CHECK((parts.pos - B).norm() < 1e-12);
    CHECK((parts.uni - CxMatrix::Identity(2, 2)).norm() < 1e-12);

    CHECK_ERROR_KIND(cartan_polar(CxMatrix::Zero(2, 2)), ErrorKind::SingularInput);
}

TEST_CASE("property: cartan_polar recovers e^Q k") {
    Gen gen(17);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = gen.pick(1, 4);
        const RealVector q = gen.box(n, 1.5);
        const CxMatrix eQ = paired_exp_diag(q);
        const CxMatrix k = testkit::unitary_exp(gen.in_k_algebra(n));
        const auto parts = cartan_polar(eQ * k);
        CHECK((parts.pos - eQ).norm() < 1e-9 * eQ.norm());
        CHECK((parts.uni - k).norm() < 1e-9);
        CHECK(is_kframe(parts.uni, 1e-9));
    }
}

TEST_CASE("property: paired eigendecompositions reconstruct their input") {
    Gen gen(23);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = gen.pick(1, 4);
        const CxMatrix X = gen.in_p(n);
        PairedSpectrum ps;
        try {
            ps = eig_paired_p(X);
        } catch (const Error&) {
            continue;  // near-degenerate draw, rejected by design
        }
        const CxMatrix& eta = ps.frame.mat;
        CHECK((eta * paired_diag(ps.positive_part) * eta.adjoint() - X).norm() <= 1e-9 * X.norm());
        CHECK(unitarity_residual(eta) <= 1e-10);
        CHECK(commutator_residual_C(eta) <= 1e-10);
        for (Eigen::Index a = 1; a < n; ++a) CHECK(ps.positive_part(a - 1) > ps.positive_part(a));

        // exp of an element of p lies in exp(p); its spectrum pairs reciprocally.
        const CxMatrix A = testkit::hermitian_exp(X);
        const auto pe = eig_paired_expp(A);
        CHECK((2.0 * pe.positive_part - ps.positive_part).norm() < 1e-9);
        CHECK((pe.frame.mat * paired_exp_diag(2.0 * pe.positive_part) * pe.frame.mat.adjoint() - A).norm() <=
              1e-9 * A.norm());
        Eigen::SelfAdjointEigenSolver<CxMatrix> es(A);
        CHECK(std::abs(es.eigenvalues().prod() - 1.0) <= 1e-9);
    }
}

TEST_CASE("property: sqrt_posdef inverts squaring, expm(X) expm(-X) = 1") {
    Gen gen(29);
    for (int trial = 0; trial < 100; ++trial) {
        const int N = 2 * gen.pick(1, 4);
        const CxMatrix M = gen.cx(N, N);
        const CxMatrix P = M * M.adjoint() + 0.1 * CxMatrix::Identity(N, N);
        CHECK((sqrt_posdef(P * P) - P).norm() <= 1e-10 * P.norm());
        const CxMatrix R = sqrt_posdef(P);
        CHECK((R * R - P).norm() <= 1e-10 * P.norm());

        CxMatrix X = gen.cx(N, N);
        X *= gen.uni(0.1, 10.0) / X.norm();
        CHECK((expm(X) * expm(-X) - CxMatrix::Identity(N, N)).norm() <= 1e-10);
    }
}
