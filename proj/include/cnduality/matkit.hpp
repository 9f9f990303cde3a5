#pragma once

// Dense complex linear algebra adapted to the Cartan structure of U(n,n).
//
// Conventions: N = 2n, C is the block anti-diagonal identity, the Lie algebra
// splits as k (anti-Hermitian, commuting with C) + p (Hermitian,
// anticommuting with C), and K is the group of unitaries commuting with C.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace cnduality {

using cplx = std::complex<double>;
using CxMatrix = Eigen::MatrixXcd;
using CxVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kStructureTol = 1e-8;
inline constexpr double kRegularityTol = 1e-6;

struct SpectralTol {
    double structure = kStructureTol;  // relative, for Hermiticity/C-relations
    double gap = kRegularityTol;       // absolute, for chamber walls and spacing
};

/// Element of K: unitary and commuting with C.
struct KFrame {
    CxMatrix mat;
};

/// Paired spectrum diag(d, -d) with d strictly decreasing and positive.
struct PairedSpectrum {
    RealVector positive_part;
    KFrame frame;
};

struct KPParts {
    CxMatrix plus;   // anti-Hermitian part
    CxMatrix minus;  // Hermitian part
};

struct PolarParts {
    CxMatrix pos;  // Hermitian positive definite, in exp(p)
    CxMatrix uni;  // unitary, in K
};

CxMatrix build_C(std::size_t n);

/// diag(v, -v) as a complex N x N matrix.
CxMatrix paired_diag(const RealVector& v);

/// diag(e^v, e^-v).
CxMatrix paired_exp_diag(const RealVector& v);

KPParts decompose_kp(const CxMatrix& Y);

/// Diagonalizes a regular element of p as X = eta diag(d, -d) eta^*.
///
/// Column a of the frame is the eigenvector for d_a with its largest
/// component made real positive; column n + a is C times it.
PairedSpectrum eig_paired_p(const CxMatrix& X, const SpectralTol& tol = {});

/// Diagonalizes a regular element of exp(p) as A = eta diag(e^{2q}, e^{-2q}) eta^*.
/// `positive_part` holds q.
PairedSpectrum eig_paired_expp(const CxMatrix& A, const SpectralTol& tol = {});

CxMatrix sqrt_posdef(const CxMatrix& A);

CxMatrix expm(const CxMatrix& X);

/// B = pos * uni with pos = (B B^*)^{1/2}.
PolarParts cartan_polar(const CxMatrix& B, double tol = kStructureTol);

// Structure predicates and residuals. All norms are Frobenius.

double hermitian_residual(const CxMatrix& X);
double anticommutator_residual_C(const CxMatrix& X);  // ||XC + CX||
double commutator_residual_C(const CxMatrix& X);      // ||XC - CX||
double unitarity_residual(const CxMatrix& U);         // ||U^*U - 1||
double group_residual(const CxMatrix& y);             // ||y^*Cy - C||

bool is_kframe(const CxMatrix& U, double tol = 1e-10);

}  // namespace cnduality
