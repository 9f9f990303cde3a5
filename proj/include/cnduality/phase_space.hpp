#pragma once

#include "cnduality/matkit.hpp"

#include <cstddef>

namespace cnduality {

inline constexpr double kChamberMargin = 1e-10;

/// Coupling constants g, g2 (both non-zero) and eps = 1 - g2/g.
class CouplingParams {
public:
    CouplingParams(double g, double g2);

    double g() const noexcept { return g_; }
    double g2() const noexcept { return g2_; }
    double eps() const noexcept { return 1.0 - g2_ / g_; }

    /// g2 = 2g is allowed but sits on the edge of what the level-set
    /// analysis covers; front ends should warn about it.
    bool at_exceptional_ratio() const noexcept;

private:
    double g_;
    double g2_;
};

/// Point (q, p) of the Sutherland phase space, q_1 > ... > q_n > 0.
struct SutherlandState {
    RealVector q;
    RealVector p;

    Eigen::Index n() const noexcept { return q.size(); }
};

/// Point (lambda, theta) of the RSvD phase space, lambda_1 > ... > lambda_n > 0.
struct RsvdState {
    RealVector lambda;
    RealVector theta;

    Eigen::Index n() const noexcept { return lambda.size(); }
};

/// Throws DomainError unless v_1 > ... > v_n > 0 with gaps above `margin`.
void require_chamber(const RealVector& v, double margin, const char* what);

bool in_chamber(const RealVector& v, double margin = kChamberMargin) noexcept;

void validate(const SutherlandState& s, double margin = kChamberMargin);
void validate(const RsvdState& s, double margin = kChamberMargin);

}  // namespace cnduality
