#pragma once

// Test-side generators and reference formulas. Everything here is written
// directly from the defining formulas, entry by entry, without going through
// the library's assembly code, so a shared bug cannot hide.

#include "cnduality/matkit.hpp"
#include "cnduality/phase_space.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace testkit {

using cnduality::cplx;
using cnduality::CouplingParams;
using cnduality::CxMatrix;
using cnduality::CxVector;
using cnduality::RealVector;
using cnduality::RsvdState;
using cnduality::SutherlandState;

inline const cplx I{0.0, 1.0};
inline const double kRefQ = 0.5 * std::log(1.0 + std::sqrt(2.0));  // sinh(2q) = 1

// Small property-test generator, independent of the library sampler.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    double sgn() { return pick(0, 1) ? 1.0 : -1.0; }

    // Decreasing, positive, well separated.
    RealVector chamber(int n, double lo = 0.2, double gap_lo = 0.3, double gap_hi = 0.9) {
        RealVector v(n);
        double cur = uni(lo, lo + 0.6);
        for (int a = n - 1; a >= 0; --a) {
            v(a) = cur;
            cur += uni(gap_lo, gap_hi);
        }
        return v;
    }
    RealVector box(int n, double b) {
        RealVector v(n);
        for (int a = 0; a < n; ++a) v(a) = uni(-b, b);
        return v;
    }
    CouplingParams couplings(double lo = 0.3, double hi = 2.0) { return {sgn() * uni(lo, hi), sgn() * uni(lo, hi)}; }

    // States measured in units of the larger coupling, which keeps the Lax
    // matrices well conditioned for any coupling draw.
    SutherlandState sutherland(int n, const CouplingParams& c, double mom = 0.8) {
        const double s = std::max(std::abs(c.g()), std::abs(c.g2()));
        return {chamber(n), s * box(n, mom)};
    }
    RsvdState rsvd(int n, const CouplingParams& c, double mom = 0.8) {
        const double s = std::max(std::abs(c.g()), std::abs(c.g2()));
        return {s * chamber(n), box(n, mom)};
    }

    CxMatrix cx(int rows, int cols, double b = 1.0) {
        CxMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = cplx(uni(-b, b), uni(-b, b));
        return m;
    }
    CxVector cxv(int n, double b = 1.0) { return cx(n, 1, b).col(0); }

    // Hermitian, anticommuting with C: [[P, Q], [-Q, -P]], P Hermitian, Q anti-Hermitian.
    CxMatrix in_p(int n, double b = 1.0) {
        const CxMatrix a = cx(n, n, b), q = cx(n, n, b);
        const CxMatrix P = 0.5 * (a + a.adjoint());
        const CxMatrix Q = 0.5 * (q - q.adjoint());
        CxMatrix X(2 * n, 2 * n);
        X << P, Q, -Q, -P;
        return X;
    }
    // Anti-Hermitian, commuting with C: [[P, Q], [Q, P]], both anti-Hermitian.
    CxMatrix in_k_algebra(int n, double b = 1.0) {
        const CxMatrix a = cx(n, n, b), q = cx(n, n, b);
        const CxMatrix P = 0.5 * (a - a.adjoint());
        const CxMatrix Q = 0.5 * (q - q.adjoint());
        CxMatrix X(2 * n, 2 * n);
        X << P, Q, Q, P;
        return X;
    }
};

inline CxMatrix ref_C(int n) {
    CxMatrix C = CxMatrix::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a) C(a, n + a) = C(n + a, a) = 1.0;
    return C;
}

// Unitary exponential of an anti-Hermitian matrix through its Hermitian
// eigendecomposition (i X is Hermitian).
inline CxMatrix unitary_exp(const CxMatrix& X) {
    Eigen::SelfAdjointEigenSolver<CxMatrix> es((cplx(0, 1) * X).eval());
    const RealVector d = es.eigenvalues();
    CxVector ph(d.size());
    for (Eigen::Index k = 0; k < d.size(); ++k) ph(k) = std::exp(cplx(0, -d(k)));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Hermitian exponential through the eigendecomposition.
inline CxMatrix hermitian_exp(const CxMatrix& X) {
    Eigen::SelfAdjointEigenSolver<CxMatrix> es(X);
    const RealVector d = es.eigenvalues().array().exp();
    return es.eigenvectors() * d.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

inline double ref_hamiltonian_s(const SutherlandState& s, const CouplingParams& c) {
    const auto n = s.q.size();
    const double g = c.g(), g2 = c.g2();
    double h = 0.5 * s.p.squaredNorm();
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b)
            h += g * g / std::pow(std::sinh(s.q(a) - s.q(b)), 2) + g * g / std::pow(std::sinh(s.q(a) + s.q(b)), 2);
    for (Eigen::Index a = 0; a < n; ++a) h += 0.5 * g2 * g2 / std::pow(std::sinh(2.0 * s.q(a)), 2);
    return h;
}

inline CxMatrix ref_lax_l(const SutherlandState& s, const CouplingParams& c) {
    const auto n = s.q.size();
    const double g = c.g(), g2 = c.g2();
    CxMatrix L = CxMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index a = 0; a < n; ++a) {
        L(a, a) = s.p(a);
        L(n + a, n + a) = -s.p(a);
        L(a, n + a) = I * g2 / std::sinh(2.0 * s.q(a));
        L(n + a, a) = -L(a, n + a);
        for (Eigen::Index b = 0; b < n; ++b) {
            if (a == b) continue;
            L(a, b) = -I * g / std::sinh(s.q(a) - s.q(b));
            L(n + a, n + b) = -L(a, b);
            L(a, n + b) = I * g / std::sinh(s.q(a) + s.q(b));
            L(n + a, b) = -L(a, n + b);
        }
    }
    return L;
}

inline cplx ref_z(const RealVector& lam, const CouplingParams& c, Eigen::Index a) {
    const double g = c.g(), g2 = c.g2();
    cplx z = -(1.0 + I * g2 / lam(a));
    for (Eigen::Index d = 0; d < lam.size(); ++d) {
        if (d == a) continue;
        z *= (1.0 + 2.0 * I * g / (lam(a) - lam(d))) * (1.0 + 2.0 * I * g / (lam(a) + lam(d)));
    }
    return z;
}

inline double ref_hamiltonian_r(const RsvdState& st, const CouplingParams& c) {
    const auto n = st.lambda.size();
    const double g = c.g(), g2 = c.g2();
    const RealVector& l = st.lambda;
    double h = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        double term = std::cosh(2.0 * st.theta(k)) * std::sqrt(1.0 + g2 * g2 / (l(k) * l(k)));
        for (Eigen::Index a = 0; a < n; ++a) {
            if (a == k) continue;
            term *= std::sqrt(1.0 + 4.0 * g * g / std::pow(l(k) - l(a), 2)) *
                    std::sqrt(1.0 + 4.0 * g * g / std::pow(l(k) + l(a), 2));
        }
        h += term;
    }
    return h;
}

// Entry table of the RSvD Lax matrix, block by block.
inline CxMatrix ref_lax_a(const RsvdState& st, const CouplingParams& c) {
    const auto n = st.lambda.size();
    const double g = c.g(), g2 = c.g2();
    const RealVector& l = st.lambda;
    const RealVector& th = st.theta;
    CxVector z(n);
    for (Eigen::Index a = 0; a < n; ++a) z(a) = ref_z(l, c, a);
    CxMatrix A(2 * n, 2 * n);
    const cplx tig = 2.0 * I * g;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const double mod = std::sqrt(std::abs(z(a) * z(b)));
            A(a, b) = std::exp(th(a) + th(b)) * mod * tig / (tig + l(a) - l(b));
            A(n + a, n + b) = std::exp(-th(a) - th(b)) * std::conj(z(a)) * z(b) / mod * tig / (tig - l(a) + l(b));
            cplx off = std::exp(th(a) - th(b)) * z(b) * std::sqrt(std::abs(z(a) / z(b))) * tig / (tig + l(a) + l(b));
            if (a == b) off += I * (g - g2) / (I * g + l(a));
            A(a, n + b) = off;
            A(n + b, a) = std::conj(off);
        }
    }
    return A;
}

inline double max_abs(const RealVector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace testkit
