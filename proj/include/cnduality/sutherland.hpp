#pragma once

// Hyperbolic C_n Sutherland model
//
//   H = 1/2 sum p_c^2 + sum_{a<b} (g^2/sinh^2(q_a - q_b) + g^2/sinh^2(q_a + q_b))
//       + 1/2 sum g2^2/sinh^2(2 q_c)
//
// with symplectic form 2 sum dq ^ dp, so q' = p/2 along the H flow.

#include "cnduality/matkit.hpp"
#include "cnduality/phase_space.hpp"

namespace cnduality {

double hamiltonian_s(const SutherlandState& s, const CouplingParams& c, double margin = kChamberMargin);

/// Hermitian Lax matrix in p: diagonal (p, -p) plus the sinh^{-1} couplings.
CxMatrix lax_l(const SutherlandState& s, const CouplingParams& c, double margin = kChamberMargin);

/// Positive eigenvalues of lax_l, decreasing.
RealVector action_variables(const SutherlandState& s, const CouplingParams& c, const SpectralTol& tol = {});

/// Constraint residual at (e^Q, L(q,p), xi(E)).
double momentum_residual_s(const SutherlandState& s, const CouplingParams& c);

/// Exact state at time t of the H flow, obtained by diagonalizing
/// e^{Q0} e^{t L0/2} (e^{Q0} e^{t L0/2})^*.
SutherlandState solve_flow_s(const SutherlandState& s0, const CouplingParams& c, double t,
                             const SpectralTol& tol = {});

/// Same solver for the flow of any invariant F, given grad F(L0) (Hermitian, in p).
SutherlandState solve_flow_s_generated(const SutherlandState& s0, const CouplingParams& c,
                                       const CxMatrix& grad_at_L0, double t, const SpectralTol& tol = {});

}  // namespace cnduality
