#include "cnduality/rsvd.hpp"

#include "cnduality/cauchy.hpp"
#include "cnduality/errors.hpp"
#include "cnduality/orbit.hpp"
#include "flow_guard.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

namespace cnduality {

namespace {

const cplx I(0.0, 1.0);

}  // namespace

namespace {

// The compact assembly, generic in the scalar type. The Lax matrix can have
// condition number e^{4 max q}, so the bundle is built in extended precision
// and only the results are rounded to double.
template <class T>
struct Compact {
    using C = std::complex<T>;
    using Vec = Eigen::Matrix<C, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
    Vec z, x, F;
    Mat A;
};

template <class T>
Compact<T> compact(const RsvdState& st, const CouplingParams& c) {
    using C = std::complex<T>;
    validate(st);
    const auto n = st.n();
    const C i(0, 1);
    const T g = c.g(), g2 = c.g2();
    Compact<T> out;
    out.z.resize(n);
    out.x.resize(2 * n);
    out.F.resize(2 * n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const T la = st.lambda(a);
        C prod = -(T(1) + i * g2 / la);
        for (Eigen::Index d = 0; d < n; ++d) {
            if (d == a) continue;
            const T ld = st.lambda(d);
            prod *= (T(1) + T(2) * i * g / (la - ld)) * (T(1) + T(2) * i * g / (la + ld));
        }
        out.z(a) = prod;
        out.x(a) = la / (T(2) * i * g);
        out.x(n + a) = -out.x(a);
        const T mod = std::abs(prod);
        const T th = st.theta(a);
        out.F(a) = std::exp(th) * std::sqrt(mod);
        out.F(n + a) = std::exp(-th) * std::conj(prod) / std::sqrt(mod);
    }
    const T eps = T(1) - g2 / g;
    out.A.resize(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < 2 * n; ++k)
        for (Eigen::Index l = 0; l < 2 * n; ++l) {
            const bool c_entry = (k == l + n) || (l == k + n);
            out.A(k, l) = (out.F(k) * std::conj(out.F(l)) + (c_entry ? eps : T(0))) / (T(1) + out.x(k) - out.x(l));
        }
    return out;
}

template <class V>
CxVector to_double(const V& v) {
    return v.template cast<cplx>();
}

}  // namespace

CxVector x_vector(const RsvdState& st, const CouplingParams& c) {
    const auto n = st.n();
    CxVector x(2 * n);
    for (Eigen::Index a = 0; a < n; ++a) {
        x(a) = st.lambda(a) / (2.0 * I * c.g());
        x(n + a) = -x(a);
    }
    return x;
}

CxVector z_values(const RsvdState& st, const CouplingParams& c) { return to_double(compact<long double>(st, c).z); }

CxVector z_values_via_w(const RsvdState& st, const CouplingParams& c) {
    validate(st);
    const auto n = st.n();
    const CauchyContext ctx(x_vector(st, c), true);
    const CxVector w = w_values(ctx);
    CxVector z(n);
    for (Eigen::Index a = 0; a < n; ++a) z(a) = -w(a) * (1.0 - c.eps() / (1.0 + 2.0 * ctx.x()(a)));
    return z;
}

CxVector f_vector(const RsvdState& st, const CouplingParams& c) { return to_double(compact<long double>(st, c).F); }

CxMatrix lax_a_compact(const RsvdState& st, const CouplingParams& c) {
    return compact<long double>(st, c).A.cast<cplx>();
}

CxMatrix lax_a_blockwise(const RsvdState& st, const CouplingParams& c) {
    const CxVector z = z_values(st, c);
    const auto n = st.n();
    const auto& lam = st.lambda;
    const auto& th = st.theta;
    const cplx tig = 2.0 * I * c.g();
    CxMatrix A(2 * n, 2 * n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const double za = std::abs(z(a));
            const double zb = std::abs(z(b));
            const double root = std::sqrt(za * zb);
            A(a, b) = std::exp(th(a) + th(b)) * root * tig / (tig + lam(a) - lam(b));
            A(n + a, n + b) = std::exp(-th(a) - th(b)) * std::conj(z(a)) * z(b) / root * tig / (tig - lam(a) + lam(b));
            cplx off = std::exp(th(a) - th(b)) * z(b) * std::sqrt(za / zb) * tig / (tig + lam(a) + lam(b));
            if (a == b) off += I * (c.g() - c.g2()) / (I * c.g() + lam(a));
            A(a, n + b) = off;
            A(n + b, a) = std::conj(off);
        }
    }
    return A;
}

RsvdLaxBundle lax_a(const RsvdState& st, const CouplingParams& c) {
    using Ext = Compact<long double>;
    const Ext ext = compact<long double>(st, c);
    RsvdLaxBundle out;
    out.z = to_double(ext.z);
    out.x = x_vector(st, c);
    out.F = to_double(ext.F);
    out.A = ext.A.cast<cplx>();

    const CxMatrix blocks = lax_a_blockwise(st, c);
    const double scale = std::max(1.0, out.A.cwiseAbs().maxCoeff());
    const double gap = (out.A - blocks).cwiseAbs().maxCoeff();
    if (gap > 1e-10 * scale) {
        std::ostringstream os;
        os << "lax_a: compact and blockwise assemblies differ by " << gap;
        throw Error(ErrorKind::StructureViolation, os.str());
    }

    const Ext::Mat H = (ext.A + ext.A.adjoint()) * 0.5L;
    Eigen::SelfAdjointEigenSolver<Ext::Mat> es(H);
    const auto& mu = es.eigenvalues();
    if (!(mu(0) > 0.0L)) {
        std::ostringstream os;
        os << "lax_a: Lax matrix is not positive definite: smallest eigenvalue " << static_cast<double>(mu(0));
        throw Error(ErrorKind::StructureViolation, os.str());
    }
    const Ext::Mat& U = es.eigenvectors();
    const Ext::Mat R = U * mu.cwiseSqrt().template cast<Ext::C>().asDiagonal() * U.adjoint();
    const Ext::Vec V = U * mu.cwiseSqrt().cwiseInverse().template cast<Ext::C>().asDiagonal() * (U.adjoint() * ext.F);
    out.R = R.cast<cplx>();
    out.V = to_double(V);
    out.spectrum = mu.cast<double>();
    return out;
}

double hamiltonian_r(const RsvdState& st, const CouplingParams& c, double margin) {
    validate(st, margin);
    const auto n = st.n();
    const auto& lam = st.lambda;
    const double g2 = c.g() * c.g();
    double h = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        double term = std::cosh(2.0 * st.theta(k)) * std::sqrt(1.0 + c.g2() * c.g2() / (lam(k) * lam(k)));
        for (Eigen::Index a = 0; a < n; ++a) {
            if (a == k) continue;
            const double dm = lam(k) - lam(a);
            const double dp = lam(k) + lam(a);
            term *= std::sqrt(1.0 + 4.0 * g2 / (dm * dm)) * std::sqrt(1.0 + 4.0 * g2 / (dp * dp));
        }
        h += term;
    }
    return h;
}

Observables reduced_observables(const RsvdState& st, const CouplingParams& c, int r) {
    if (r < 1) throw Error(ErrorKind::DomainError, "reduced_observables: r must be positive");
    const CxVector z = z_values(st, c);
    const bool even = (r % 2 == 0);
    Observables out;
    for (Eigen::Index a = 0; a < st.n(); ++a) {
        const double lr = std::pow(st.lambda(a), r);
        if (even) out.phi += 2.0 / r * lr;
        const double hyp = even ? std::cosh(2.0 * st.theta(a)) : std::sinh(2.0 * st.theta(a));
        out.psi += 2.0 * lr * std::abs(z(a)) * hyp;
    }
    return out;
}

Observables trace_observables(const RsvdState& st, const CouplingParams& c, int r) {
    if (r < 1) throw Error(ErrorKind::DomainError, "trace_observables: r must be positive");
    const RsvdLaxBundle b = lax_a(st, c);
    const auto N = b.A.rows();
    const CxMatrix& y = b.R;
    const CxMatrix Y = paired_diag(st.lambda);
    const CxMatrix rho = xi_of(b.V, c);
    const CxMatrix C = build_C(static_cast<std::size_t>(st.n()));
    const CxMatrix Z = rho / (I * c.g()) + CxMatrix::Identity(N, N) - c.eps() * C;

    CxMatrix Yr = CxMatrix::Identity(N, N);
    CxMatrix Ysr = CxMatrix::Identity(N, N);
    for (int k = 0; k < r; ++k) {
        Yr = Yr * Y;
        Ysr = Ysr * Y.adjoint();
    }
    const CxMatrix sandwich = y.adjoint() * Z * y;
    Observables out;
    out.phi = ((Yr.trace() + Ysr.trace()) / (2.0 * r)).real();
    out.psi = ((Yr * sandwich).trace() + (Ysr * sandwich).trace()).real() / 2.0;
    return out;
}

double momentum_residual_r(const RsvdState& st, const CouplingParams& c) {
    const RsvdLaxBundle b = lax_a(st, c);
    return constraint_residual(b.R, paired_diag(st.lambda), xi_of(b.V, c));
}

CxMatrix grad_f1(const CxMatrix& Ahalf) {
    if (Ahalf.rows() == 0 || Ahalf.rows() != Ahalf.cols() || Ahalf.rows() % 2 != 0)
        throw Error(ErrorKind::InvalidDimension, "grad_f1: expected an even square matrix");
    const CxMatrix A = Ahalf * Ahalf;
    const CxMatrix C = build_C(static_cast<std::size_t>(Ahalf.rows() / 2));
    return 0.5 * (A - C * A * C);
}

RealVector dual_actions(const RsvdState& st, const CouplingParams& c, const SpectralTol& tol) {
    return eig_paired_expp(lax_a_compact(st, c), tol).positive_part;
}

namespace {

RsvdState flow_r_at(const RsvdState& st0, const CouplingParams& c, const CxMatrix& A0, const CxMatrix& grad, double t,
                    const SpectralTol& tol) {
    const auto n = st0.n();
    const CxMatrix Y = paired_diag(st0.lambda) - t * grad;
    const PairedSpectrum ps = eig_paired_p(Y, tol);
    const CxMatrix& eta_r = ps.frame.mat;
    const CxMatrix At = eta_r.adjoint() * A0 * eta_r;

    RsvdState out;
    out.lambda = ps.positive_part;
    require_chamber(out.lambda, kChamberMargin, "lambda(t)");
    const CxVector z = z_values(RsvdState{out.lambda, RealVector::Zero(n)}, c);
    out.theta.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const double diag = At(a, a).real();
        if (!(diag > 0.0))
            throw Error(ErrorKind::StructureViolation, "solve_flow_r: reconstructed Lax matrix lost positivity");
        out.theta(a) = 0.5 * std::log(diag / std::abs(z(a)));
    }
    return out;
}

// Certifies that Y(s) = Y0 - s G keeps a simple spectrum for s between 0 and t.
// Eigenvalues of a Hermitian pencil move at most |ds| ||G|| each (Weyl), so a
// step of a quarter of the current gap over ||G|| at most halves it. Throws at a collision.
void certify_path(const CxMatrix& Y0, const CxMatrix& G, double t, const SpectralTol& tol) {
    const double speed = G.operatorNorm();
    if (speed == 0.0 || t == 0.0) return;
    const double dir = t > 0.0 ? 1.0 : -1.0;
    double s = 0.0, safe = 0.0;
    for (int step = 0; step < 1000000; ++step) {
        Eigen::SelfAdjointEigenSolver<CxMatrix> es(Y0 - s * G, Eigen::EigenvaluesOnly);
        const RealVector& mu = es.eigenvalues();
        double gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 1; k < mu.size(); ++k) gap = std::min(gap, mu(k) - mu(k - 1));
        if (!(gap > tol.gap)) {
            std::ostringstream os;
            os.precision(17);
            os << "solve_flow_r: spectrum of the linear flow became degenerate near t = " << s;
            throw Error(ErrorKind::RegularityViolation, os.str(), safe);
        }
        safe = s;
        if (std::abs(s) >= std::abs(t)) return;
        s += dir * std::min(0.25 * gap / speed, std::abs(t - s));
    }
    throw Error(ErrorKind::RegularityViolation, "solve_flow_r: could not certify a simple spectrum along the path");
}

}  // namespace

RsvdState solve_flow_r_generated(const RsvdState& st0, const CouplingParams& c, const CxMatrix& grad_at_A0half,
                                 double t, const SpectralTol& tol) {
    const CxMatrix A0 = lax_a_compact(st0, c);
    if (grad_at_A0half.rows() != A0.rows() || grad_at_A0half.cols() != A0.cols())
        throw Error(ErrorKind::InvalidDimension, "solve_flow_r: gradient has the wrong size");
    certify_path(paired_diag(st0.lambda), grad_at_A0half, t, tol);
    return detail::run_with_collision_report(
        [&](double tt) { return flow_r_at(st0, c, A0, grad_at_A0half, tt, tol); }, t);
}

RsvdState solve_flow_r(const RsvdState& st0, const CouplingParams& c, double t, const SpectralTol& tol) {
    const RsvdLaxBundle b = lax_a(st0, c);
    return solve_flow_r_generated(st0, c, grad_f1(b.R), t, tol);
}

}  // namespace cnduality
