#pragma once

// Independent reference computations: fixed-step RK4 on Hamilton's equations
// and central-difference Poisson brackets. Nothing here touches the
// eigensolvers, so agreement with the spectral solvers is meaningful.

#include "cnduality/phase_space.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace cnduality {

/// Canonical pair with the coordinate in `x` and its conjugate momentum in
/// `y`. For the Sutherland model (x, y) = (q, p); for RSvD (x, y) = (theta, lambda).
struct PhasePoint {
    RealVector x;
    RealVector y;
};

using PhaseField = std::function<double(const PhasePoint&)>;
using PhaseDomain = std::function<bool(const PhasePoint&)>;

/// Both symplectic forms carry a factor 2, so {x_a, y_b} = scale * delta_ab.
struct BracketConvention {
    static constexpr double scale = 0.5;
};

PhasePoint to_phase_point(const SutherlandState& s);
PhasePoint to_phase_point(const RsvdState& st);
SutherlandState sutherland_from_phase_point(const PhasePoint& pt);
RsvdState rsvd_from_phase_point(const PhasePoint& pt);

/// Chamber condition on the position-like half (x for Sutherland, y for RSvD).
bool in_sutherland_domain(const PhasePoint& pt);
bool in_rsvd_domain(const PhasePoint& pt);

/// scale * sum_a (d_x f d_y h - d_y f d_x h) by central differences. Throws
/// DomainError if any stencil point fails `domain` (when given).
double fd_poisson(const PhaseField& f, const PhaseField& h, const PhasePoint& pt, double step,
                  const PhaseDomain& domain = {});

/// Analytic dH/dq of the Sutherland Hamiltonian.
RealVector sutherland_grad_q(const SutherlandState& s, const CouplingParams& c);

/// Central-difference partials of the RSvD Hamiltonian (step 1e-6):
/// first = dH/dlambda, second = dH/dtheta.
std::pair<RealVector, RealVector> rsvd_grad_fd(const RsvdState& st, const CouplingParams& c, double step = 1e-6);

struct Rk4Options {
    double dt = 1e-3;
    bool richardson = false;    // rerun at dt/2 and report max|diff|/15
    // When positive, keep halving dt until the Richardson estimate drops
    // below this (at most `max_refinements` times). Implies `richardson`.
    double richardson_target = 0.0;
    int max_refinements = 6;
    bool keep_partial = false;  // return a truncated trajectory instead of throwing
    int max_halvings = 40;      // per step, when a stage hits a chamber wall
};

template <class State>
struct Trajectory {
    std::vector<double> t;
    std::vector<State> states;
    double richardson_error = std::numeric_limits<double>::quiet_NaN();
    double dt = 0.0;  // step actually used
    bool aborted = false;
    double last_safe_t = 0.0;
    std::string abort_reason;
};

/// Samples at `times` (non-decreasing, starting at or after 0).
Trajectory<SutherlandState> rk4_sutherland_at(const SutherlandState& s0, const CouplingParams& c,
                                              const std::vector<double>& times, const Rk4Options& opt = {});
Trajectory<RsvdState> rk4_rsvd_at(const RsvdState& st0, const CouplingParams& c, const std::vector<double>& times,
                                  const Rk4Options& opt = {});

/// Every fixed step from 0 to t_end.
Trajectory<SutherlandState> rk4_sutherland(const SutherlandState& s0, const CouplingParams& c, double t_end,
                                           double dt);
Trajectory<RsvdState> rk4_rsvd(const RsvdState& st0, const CouplingParams& c, double t_end, double dt);

}  // namespace cnduality
