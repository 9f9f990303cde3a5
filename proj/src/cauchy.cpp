#include "cnduality/cauchy.hpp"

#include "cnduality/errors.hpp"

#include <algorithm>
#include <complex>
#include <sstream>

namespace cnduality {

namespace {

void guard(cplx denom, const char* who) {
    if (std::abs(denom) < kPoleGuard) {
        std::ostringstream os;
        os << who << ": denominator " << denom << " below pole guard";
        throw Error(ErrorKind::PoleError, os.str());
    }
}

using XC = std::complex<long double>;
using XVec = Eigen::Matrix<XC, Eigen::Dynamic, 1>;
using XMat = Eigen::Matrix<XC, Eigen::Dynamic, Eigen::Dynamic>;

// The w products and the identities among them cancel heavily once the
// weights grow, so everything is evaluated in extended precision and only
// results are rounded.
XVec widen(const CxVector& v) { return v.cast<XC>(); }

XMat cauchy_x(const XVec& x) {
    const auto N = x.size();
    XMat M(N, N);
    for (Eigen::Index k = 0; k < N; ++k)
        for (Eigen::Index l = 0; l < N; ++l) {
            const XC d = 1.0L + x(k) - x(l);
            guard(cplx(d), "cauchy_matrix");
            M(k, l) = 1.0L / d;
        }
    return M;
}

XVec w_x(const XVec& x) {
    const auto N = x.size();
    XVec w(N);
    for (Eigen::Index j = 0; j < N; ++j) {
        XC prod = 1.0L;
        for (Eigen::Index k = 0; k < N; ++k) {
            if (k == j) continue;
            const XC d = x(j) - x(k);
            guard(cplx(d), "w_values");
            prod *= (1.0L + d) / d;
        }
        w(j) = prod;
    }
    return w;
}

XMat inverse_x(const XVec& x) { return w_x(-x).asDiagonal() * cauchy_x(-x) * w_x(x).asDiagonal(); }

}  // namespace

CauchyContext::CauchyContext(CxVector x, bool c_symmetric) : x_(std::move(x)), c_symmetric_(c_symmetric) {
    if (x_.size() == 0) throw Error(ErrorKind::InvalidDimension, "CauchyContext: empty x");
    if (c_symmetric_) {
        if (x_.size() % 2 != 0)
            throw Error(ErrorKind::InvalidDimension, "CauchyContext: C-symmetric x needs even length");
        const auto n = x_.size() / 2;
        for (Eigen::Index a = 0; a < n; ++a) {
            if (x_(n + a) != -x_(a))
                throw Error(ErrorKind::DomainError, "CauchyContext: x_{n+a} != -x_a");
        }
    }
}

CauchyContext CauchyContext::c_symmetric_from_half(const CxVector& half) {
    CxVector x(2 * half.size());
    x.head(half.size()) = half;
    x.tail(half.size()) = -half;
    return CauchyContext(std::move(x), true);
}

CauchyContext CauchyContext::negated() const { return CauchyContext(-x_, c_symmetric_); }

CxMatrix cauchy_matrix(const CauchyContext& ctx) { return cauchy_x(widen(ctx.x())).cast<cplx>(); }

CxVector w_values(const CauchyContext& ctx) { return w_x(widen(ctx.x())).cast<cplx>(); }

namespace {

// w from the half-size product valid for C-symmetric x; w_{n+a}(x) = w_a(-x).
XVec w_c_type_x(const XVec& x) {
    const auto n = x.size() / 2;
    auto half_product = [&](Eigen::Index a, long double sign) {
        const XC xa = sign * x(a);
        guard(cplx(2.0L * xa), "w_values_c_type");
        XC prod = 1.0L + 1.0L / (2.0L * xa);
        for (Eigen::Index d = 0; d < n; ++d) {
            if (d == a) continue;
            const XC xd = sign * x(d);
            guard(cplx(xa - xd), "w_values_c_type");
            guard(cplx(xa + xd), "w_values_c_type");
            prod *= (1.0L + 1.0L / (xa - xd)) * (1.0L + 1.0L / (xa + xd));
        }
        return prod;
    };
    XVec w(2 * n);
    for (Eigen::Index a = 0; a < n; ++a) {
        w(a) = half_product(a, 1.0L);
        w(n + a) = half_product(a, -1.0L);
    }
    return w;
}

}  // namespace

CxVector w_values_c_type(const CauchyContext& ctx) {
    if (!ctx.satisfies_c_symmetry())
        throw Error(ErrorKind::DomainError, "w_values_c_type: x is not C-symmetric");
    return w_c_type_x(widen(ctx.x())).cast<cplx>();
}

cplx cauchy_det(const CauchyContext& ctx) {
    const auto& x = ctx.x();
    const auto N = x.size();
    cplx det = 1.0;
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = k + 1; l < N; ++l) {
            const cplx d2 = (x(k) - x(l)) * (x(k) - x(l));
            if (std::abs(d2 - 1.0) < kPoleGuard)
                throw Error(ErrorKind::SingularCauchy, "cauchy_det: (x_k - x_l)^2 = 1");
            // 1/(1 - d^-2) written so that d = 0 gives 0 instead of a division by zero.
            det *= d2 / (d2 - 1.0);
        }
    }
    return det;
}

CxMatrix cauchy_inverse(const CauchyContext& ctx) { return inverse_x(widen(ctx.x())).cast<cplx>(); }

PartialFraction partial_fraction_check(const CxVector& alphas, const CxVector& betas, cplx z) {
    const auto M = alphas.size();
    const auto N = betas.size();
    if (N == 0 || M > N)
        throw Error(ErrorKind::InvalidDimension, "partial_fraction_check: need 0 <= M <= N, N >= 1");
    for (Eigen::Index k = 0; k < N; ++k) {
        guard(z - betas(k), "partial_fraction_check");
        for (Eigen::Index l = k + 1; l < N; ++l) guard(betas(k) - betas(l), "partial_fraction_check");
    }

    PartialFraction out;
    cplx num = 1.0;
    cplx den = 1.0;
    for (Eigen::Index k = 0; k < M; ++k) num *= z - alphas(k);
    for (Eigen::Index l = 0; l < N; ++l) den *= z - betas(l);
    out.lhs = num / den;

    out.rhs = (M == N) ? 1.0 : 0.0;
    for (Eigen::Index j = 0; j < N; ++j) {
        cplx residue = 1.0;
        for (Eigen::Index k = 0; k < M; ++k) residue *= betas(j) - alphas(k);
        for (Eigen::Index l = 0; l < N; ++l) {
            if (l != j) residue /= betas(j) - betas(l);
        }
        out.rhs += residue / (z - betas(j));
    }
    return out;
}

double IdentityReport::max_residual() const {
    double m = std::max({w_sum_against_cauchy, trace_w, inverse});
    for (const auto& v : {w_half_sum, w_half_shift, cwc, ccc, involution, c_type_w}) {
        if (v) m = std::max(m, *v);
    }
    return m;
}

IdentityReport identity_suite(const CauchyContext& ctx) {
    const XVec x = widen(ctx.x());
    const auto N = x.size();
    const XVec w = w_x(x);
    const XMat cm = cauchy_x(x);
    const XMat one = XMat::Identity(N, N);
    auto norm = [](const auto& m) { return static_cast<double>(m.norm()); };
    auto mag = [](const XC& z) { return static_cast<double>(std::abs(z)); };

    IdentityReport rep;
    for (Eigen::Index k = 0; k < N; ++k) {
        XC s = 0.0L;
        for (Eigen::Index j = 0; j < N; ++j) s += w(j) / (1.0L + x(j) - x(k));
        rep.w_sum_against_cauchy = std::max(rep.w_sum_against_cauchy, mag(s - 1.0L));
    }
    rep.trace_w = mag(w.sum() - static_cast<long double>(N));
    rep.inverse = norm(cm * inverse_x(x) - one);

    if (!ctx.satisfies_c_symmetry()) return rep;

    XC half_sum = 0.0L;
    for (Eigen::Index j = 0; j < N; ++j) {
        guard(cplx(1.0L + 2.0L * x(j)), "identity_suite");
        half_sum += w(j) / (1.0L + 2.0L * x(j));
    }
    rep.w_half_sum = mag(half_sum);

    double shift = 0.0;
    for (Eigen::Index k = 0; k < N; ++k) {
        guard(cplx(1.0L - 2.0L * x(k)), "identity_suite");
        XC s = 0.0L;
        for (Eigen::Index j = 0; j < N; ++j) s += w(j) / ((1.0L + x(j) - x(k)) * (1.0L + 2.0L * x(j)));
        shift = std::max(shift, mag(s + 1.0L / (1.0L - 2.0L * x(k))));
    }
    rep.w_half_shift = shift;

    const XMat C = build_C(static_cast<std::size_t>(N / 2)).cast<XC>();
    const XMat W = w.asDiagonal();
    const XMat Wneg = w_x(-x).asDiagonal();
    rep.cwc = norm(C * W * C - Wneg);
    rep.ccc = norm(C * cm * C - cauchy_x(-x));
    const XMat T = cm * C * W;
    rep.involution = norm(T * T - one);
    rep.c_type_w = static_cast<double>((w - w_c_type_x(x)).cwiseAbs().maxCoeff());
    return rep;
}

}  // namespace cnduality
