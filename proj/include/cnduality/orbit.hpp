#pragma once

// The coadjoint-orbit ingredient shared by both models: the vector E, the
// map V -> xi(V) and the residual of the zero-momentum constraint.

#include "cnduality/matkit.hpp"
#include "cnduality/phase_space.hpp"

namespace cnduality {

/// E_a = -E_{n+a} = 1.
CxVector orbit_vector_E(std::size_t n);

/// xi(V) = i g (V V^* - 1) + i (g - g2) C, for V^*V = N and CV + V = 0.
CxMatrix xi_of(const CxVector& V, const CouplingParams& c, double tol = kStructureTol);

/// ||(y Y y^{-1})_+ + rho|| + ||Y_+||, zero exactly on the constraint surface.
double constraint_residual(const CxMatrix& y, const CxMatrix& Y, const CxMatrix& rho);

}  // namespace cnduality
