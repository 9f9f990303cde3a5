#pragma once

// The action-angle duality map between the Sutherland and RSvD phase spaces
// and its inverse. Both directions read one model's coordinates off the
// other model's Lax matrix.

#include "cnduality/matkit.hpp"
#include "cnduality/phase_space.hpp"

namespace cnduality {

/// Gauge-invariant comparison between the analytically built Lax matrix of
/// the image point and the one reconstructed spectrally. All entries are
/// relative to max(1, largest entry).
struct DualityDiagnostics {
    double spectrum_mismatch = 0.0;
    double modulus_mismatch = 0.0;
    double imag_residue = 0.0;  // largest |Im| of a diagonal entry read as real

    bool imag_warning() const noexcept { return imag_residue > 1e-8; }
};

inline constexpr double kDualSpectrumTol = 1e-8;
inline constexpr double kDualModulusTol = 1e-7;

struct SToR {
    RsvdState state;
    DualityDiagnostics diagnostics;
};

struct RToS {
    SutherlandState state;
    DualityDiagnostics diagnostics;
};

/// (q, p) -> (lambda, theta). Throws StructureViolation when the consistency
/// check fails and RegularityViolation on a degenerate Lax spectrum.
SToR dualize_s_to_r_checked(const SutherlandState& s, const CouplingParams& c, const SpectralTol& tol = {});
RsvdState dualize_s_to_r(const SutherlandState& s, const CouplingParams& c, const SpectralTol& tol = {});

/// (lambda, theta) -> (q, p).
RToS dualize_r_to_s_checked(const RsvdState& st, const CouplingParams& c, const SpectralTol& tol = {});
SutherlandState dualize_r_to_s(const RsvdState& st, const CouplingParams& c, const SpectralTol& tol = {});

/// Action and angle variables of one model expressed as functions on the
/// other model's phase space.
struct ActionAngle {
    RealVector action;
    RealVector angle;
};

/// On the Sutherland side: action = lambda_hat, angle = theta_hat.
ActionAngle pullback_coords(const SutherlandState& s, const CouplingParams& c);

/// On the RSvD side: action = q_check, angle = p_check.
ActionAngle pullback_coords_r(const RsvdState& st, const CouplingParams& c);

}  // namespace cnduality
