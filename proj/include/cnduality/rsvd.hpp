#pragma once

// Rational C_n Ruijsenaars-Schneider-van Diejen model
//
//   H = sum_c cosh(2 theta_c) (1 + g2^2/lambda_c^2)^{1/2}
//         prod_{a != c} (1 + 4g^2/(lambda_c - lambda_a)^2)^{1/2} (1 + 4g^2/(lambda_c + lambda_a)^2)^{1/2}
//
// with symplectic form 2 sum dtheta ^ dlambda (theta in the coordinate slot).
// Its Lax matrix A(lambda, theta) is a positive element of U(n,n) built from a
// deformed Cauchy matrix.

#include "cnduality/matkit.hpp"
#include "cnduality/phase_space.hpp"

#include <functional>

namespace cnduality {

struct RsvdLaxBundle {
    CxMatrix A;  // Lax matrix
    CxMatrix R;  // positive square root of A
    CxVector F;
    CxVector V;  // R^{-1} F
    RealVector spectrum;  // eigenvalues of A, ascending, from the extended-precision solve
    CxVector z;  // n values
    CxVector x;  // x_a = lambda_a/(2ig), x_{n+a} = -x_a
};

/// z_a = -(1 + i g2/lambda_a) prod_{d != a} (1 + 2ig/(lambda_a - lambda_d)) (1 + 2ig/(lambda_a + lambda_d)).
CxVector z_values(const RsvdState& st, const CouplingParams& c);

/// z_a through the Cauchy weights: -w_a(x) (1 - eps/(1 + 2 x_a)).
CxVector z_values_via_w(const RsvdState& st, const CouplingParams& c);

CxVector x_vector(const RsvdState& st, const CouplingParams& c);

/// F_a = e^{theta_a} |z_a|^{1/2}, F_{n+a} = e^{-theta_a} conj(z_a) |z_a|^{-1/2}.
CxVector f_vector(const RsvdState& st, const CouplingParams& c);

/// A_{kl} = (F_k conj(F_l) + eps C_{kl}) / (1 + x_k - x_l).
CxMatrix lax_a_compact(const RsvdState& st, const CouplingParams& c);

/// The same matrix assembled block by block from the explicit entry formulas.
CxMatrix lax_a_blockwise(const RsvdState& st, const CouplingParams& c);

/// Full bundle. Throws StructureViolation if the two assemblies disagree or A
/// fails to be positive definite.
RsvdLaxBundle lax_a(const RsvdState& st, const CouplingParams& c);

double hamiltonian_r(const RsvdState& st, const CouplingParams& c, double margin = kChamberMargin);

struct Observables {
    double phi = 0.0;
    double psi = 0.0;
};

/// Closed forms of the two observable families on the reduced phase space.
Observables reduced_observables(const RsvdState& st, const CouplingParams& c, int r);

/// The same observables evaluated from their trace definitions at
/// (y, Y, rho) = (A^{1/2}, diag(lambda, -lambda), xi(V)).
Observables trace_observables(const RsvdState& st, const CouplingParams& c, int r);

/// Constraint residual at (A^{1/2}, diag(lambda, -lambda), xi(V)).
double momentum_residual_r(const RsvdState& st, const CouplingParams& c);

/// Gradient of f(y) = tr(y y^*)/2 with respect to the trace form and
/// left-trivialized tangent vectors, at a Hermitian y: (A - C A C)/2 with A = y^2.
CxMatrix grad_f1(const CxMatrix& Ahalf);

/// Dual actions: positive eigenvalues of ln(A)/2, decreasing.
RealVector dual_actions(const RsvdState& st, const CouplingParams& c, const SpectralTol& tol = {});

/// Exact state at time t of the H flow, from diagonalizing diag(lambda0, -lambda0) - t grad f1(A0^{1/2}).
RsvdState solve_flow_r(const RsvdState& st0, const CouplingParams& c, double t, const SpectralTol& tol = {});

/// Same solver for any K x K invariant f, given its gradient at A0^{1/2}.
RsvdState solve_flow_r_generated(const RsvdState& st0, const CouplingParams& c, const CxMatrix& grad_at_A0half,
                                 double t, const SpectralTol& tol = {});

}  // namespace cnduality
