#include "cnduality/matkit.hpp"

#include <Eigen/SVD>

#include "cnduality/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cnduality {

namespace {

Eigen::Index half_dim(const CxMatrix& X, const char* who) {
    if (X.rows() == 0 || X.rows() != X.cols() || X.rows() % 2 != 0) {
        std::ostringstream os;
        os << who << ": expected a square matrix of even size, got " << X.rows() << "x" << X.cols();
        throw Error(ErrorKind::InvalidDimension, os.str());
    }
    return X.rows() / 2;
}

// Rotates v so that its largest-magnitude entry is real and positive.
void fix_phase(Eigen::Ref<CxVector> v) {
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    const double mag = std::abs(v(k));
    if (mag == 0.0) return;
    v *= std::conj(v(k)) / mag;
    v(k) = cplx(mag, 0.0);
}

CxVector apply_C(const CxVector& v) {
    const auto n = v.size() / 2;
    CxVector out(v.size());
    out.head(n) = v.tail(n);
    out.tail(n) = v.head(n);
    return out;
}

}  // namespace

CxMatrix build_C(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidDimension, "build_C: n must be at least 1");
    const auto m = static_cast<Eigen::Index>(n);
    CxMatrix C = CxMatrix::Zero(2 * m, 2 * m);
    C.topRightCorner(m, m).setIdentity();
    C.bottomLeftCorner(m, m).setIdentity();
    return C;
}

CxMatrix paired_diag(const RealVector& v) {
    const auto n = v.size();
    CxMatrix D = CxMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index a = 0; a < n; ++a) {
        D(a, a) = v(a);
        D(n + a, n + a) = -v(a);
    }
    return D;
}

CxMatrix paired_exp_diag(const RealVector& v) {
    const auto n = v.size();
    CxMatrix D = CxMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index a = 0; a < n; ++a) {
        D(a, a) = std::exp(v(a));
        D(n + a, n + a) = std::exp(-v(a));
    }
    return D;
}

KPParts decompose_kp(const CxMatrix& Y) {
    return {0.5 * (Y - Y.adjoint()), 0.5 * (Y + Y.adjoint())};
}

double hermitian_residual(const CxMatrix& X) { return (X - X.adjoint()).norm(); }

double anticommutator_residual_C(const CxMatrix& X) {
    const CxMatrix C = build_C(static_cast<std::size_t>(half_dim(X, "anticommutator_residual_C")));
    return (X * C + C * X).norm();
}

double commutator_residual_C(const CxMatrix& X) {
    const CxMatrix C = build_C(static_cast<std::size_t>(half_dim(X, "commutator_residual_C")));
    return (X * C - C * X).norm();
}

double unitarity_residual(const CxMatrix& U) {
    return (U.adjoint() * U - CxMatrix::Identity(U.rows(), U.cols())).norm();
}

double group_residual(const CxMatrix& y) {
    const CxMatrix C = build_C(static_cast<std::size_t>(half_dim(y, "group_residual")));
    return (y.adjoint() * C * y - C).norm();
}

bool is_kframe(const CxMatrix& U, double tol) {
    if (U.rows() == 0 || U.rows() != U.cols() || U.rows() % 2 != 0) return false;
    return unitarity_residual(U) <= tol && commutator_residual_C(U) <= tol;
}

PairedSpectrum eig_paired_p(const CxMatrix& X, const SpectralTol& tol) {
    const auto n = half_dim(X, "eig_paired_p");
    const auto N = 2 * n;
    const double scale = std::max(1.0, X.norm());
    if (hermitian_residual(X) > tol.structure * scale)
        throw Error(ErrorKind::StructureViolation, "eig_paired_p: input is not Hermitian");
    if (anticommutator_residual_C(X) > tol.structure * scale)
        throw Error(ErrorKind::StructureViolation, "eig_paired_p: input does not anticommute with C");

    const CxMatrix H = 0.5 * (X + X.adjoint());
    Eigen::SelfAdjointEigenSolver<CxMatrix> es(H);
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::StructureViolation, "eig_paired_p: eigensolver did not converge");
    const RealVector& ev = es.eigenvalues();

    PairedSpectrum out;
    out.positive_part.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) out.positive_part(a) = ev(N - 1 - a);

    const RealVector& d = out.positive_part;
    if (d(n - 1) <= tol.gap) {
        std::ostringstream os;
        os << "eig_paired_p: eigenvalue " << d(n - 1) << " too close to zero";
        throw Error(ErrorKind::RegularityViolation, os.str());
    }
    for (Eigen::Index a = 0; a + 1 < n; ++a) {
        if (d(a) - d(a + 1) <= tol.gap) {
            std::ostringstream os;
            os << "eig_paired_p: eigenvalues " << d(a) << " and " << d(a + 1) << " nearly coincide";
            throw Error(ErrorKind::RegularityViolation, os.str());
        }
    }

    CxMatrix& F = out.frame.mat;
    F.resize(N, N);
    for (Eigen::Index a = 0; a < n; ++a) {
        CxVector v = es.eigenvectors().col(N - 1 - a);
        fix_phase(v);
        F.col(a) = v;
        F.col(n + a) = apply_C(v);
    }
    return out;
}

PairedSpectrum eig_paired_expp(const CxMatrix& A, const SpectralTol& tol) {
    const auto n = half_dim(A, "eig_paired_expp");
    const auto N = 2 * n;
    const double norm = A.norm();
    const double scale = std::max(1.0, norm);
    if (hermitian_residual(A) > tol.structure * scale)
        throw Error(ErrorKind::StructureViolation, "eig_paired_expp: input is not Hermitian");

    const CxMatrix H = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<CxMatrix> es(H);
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::StructureViolation, "eig_paired_expp: eigensolver did not converge");
    const RealVector& ev = es.eigenvalues();
    if (ev(0) <= 0.0) {
        std::ostringstream os;
        os << "eig_paired_expp: smallest eigenvalue " << ev(0) << " is not positive";
        throw Error(ErrorKind::NotInExpP, os.str());
    }

    const CxMatrix C = build_C(static_cast<std::size_t>(n));
    if ((H * C * H - C).norm() > tol.structure * scale * scale)
        throw Error(ErrorKind::StructureViolation, "eig_paired_expp: A C A != C");

    PairedSpectrum out;
    out.positive_part.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) out.positive_part(a) = 0.5 * std::log(ev(N - 1 - a));

    const RealVector& q = out.positive_part;
    if (q(n - 1) <= tol.gap) {
        std::ostringstream os;
        os << "eig_paired_expp: q = " << q(n - 1) << " too close to zero";
        throw Error(ErrorKind::RegularityViolation, os.str());
    }
    for (Eigen::Index a = 0; a + 1 < n; ++a) {
        if (q(a) - q(a + 1) <= tol.gap) {
            std::ostringstream os;
            os << "eig_paired_expp: q values " << q(a) << " and " << q(a + 1) << " nearly coincide";
            throw Error(ErrorKind::RegularityViolation, os.str());
        }
    }
    // ev(a) is the partner of ev(N-1-a) when the spectrum pairs reciprocally.
    for (Eigen::Index a = 0; a < n; ++a) {
        if (std::abs(ev(a) * ev(N - 1 - a) - 1.0) > tol.structure * scale * scale)
            throw Error(ErrorKind::StructureViolation, "eig_paired_expp: spectrum is not reciprocally paired");
    }

    CxMatrix& F = out.frame.mat;
    F.resize(N, N);
    for (Eigen::Index a = 0; a < n; ++a) {
        CxVector v = es.eigenvectors().col(N - 1 - a);
        fix_phase(v);
        F.col(a) = v;
        F.col(n + a) = apply_C(v);
    }
    return out;
}

CxMatrix sqrt_posdef(const CxMatrix& A) {
    if (A.rows() != A.cols() || A.rows() == 0)
        throw Error(ErrorKind::InvalidDimension, "sqrt_posdef: expected a non-empty square matrix");
    const CxMatrix H = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<CxMatrix> es(H);
    const RealVector& ev = es.eigenvalues();
    if (ev(0) <= 0.0) {
        std::ostringstream os;
        os << "sqrt_posdef: smallest eigenvalue " << ev(0) << " is not positive";
        throw Error(ErrorKind::NotPositiveDefinite, os.str());
    }
    const CxMatrix& U = es.eigenvectors();
    const CxMatrix R = U * ev.cwiseSqrt().cast<cplx>().asDiagonal() * U.adjoint();
    return 0.5 * (R + R.adjoint());
}

CxMatrix expm(const CxMatrix& X) {
    if (X.rows() != X.cols())
        throw Error(ErrorKind::InvalidDimension, "expm: expected a square matrix");
    if (X.size() == 0) return X;
    if (hermitian_residual(X) <= 1e-13 * std::max(1.0, X.norm())) {
        const CxMatrix H = 0.5 * (X + X.adjoint());
        Eigen::SelfAdjointEigenSolver<CxMatrix> es(H);
        const CxMatrix& U = es.eigenvectors();
        const CxMatrix E = U * es.eigenvalues().array().exp().matrix().cast<cplx>().asDiagonal() * U.adjoint();
        return 0.5 * (E + E.adjoint());
    }
    return X.exp();
}

PolarParts cartan_polar(const CxMatrix& B, double tol) {
    half_dim(B, "cartan_polar");
    Eigen::FullPivLU<CxMatrix> lu(B);
    if (!lu.isInvertible()) throw Error(ErrorKind::SingularInput, "cartan_polar: input is singular");
    const double scale = std::max(1.0, B.squaredNorm());
    if (group_residual(B) > tol * scale)
        throw Error(ErrorKind::StructureViolation, "cartan_polar: input is not in U(n,n)");

    // From the SVD rather than sqrt(B B^*): the latter squares the condition number.
    const Eigen::JacobiSVD<CxMatrix> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CxMatrix& U = svd.matrixU();
    PolarParts out;
    out.pos = U * svd.singularValues().cast<cplx>().asDiagonal() * U.adjoint();
    out.pos = 0.5 * (out.pos + out.pos.adjoint());
    out.uni = U * svd.matrixV().adjoint();
    return out;
}

}  // namespace cnduality
