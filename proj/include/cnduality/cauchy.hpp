#pragma once

// Cauchy matrices C(x)_{kl} = 1/(1 + x_k - x_l), the weights
// w_j(x) = prod_{k != j} (1 + x_j - x_k)/(x_j - x_k), and the identities
// they satisfy. These are the algebraic backbone of the RSvD Lax matrix.

#include "cnduality/matkit.hpp"

#include <optional>

namespace cnduality {

inline constexpr double kPoleGuard = 1e-12;

class CauchyContext {
public:
    /// With `c_symmetric`, x must have even length and x_{n+a} = -x_a exactly.
    explicit CauchyContext(CxVector x, bool c_symmetric = false);

    /// Builds the C-symmetric vector (h, -h).
    static CauchyContext c_symmetric_from_half(const CxVector& half);

    const CxVector& x() const noexcept { return x_; }
    bool satisfies_c_symmetry() const noexcept { return c_symmetric_; }
    Eigen::Index size() const noexcept { return x_.size(); }

    /// Context for -x, with the same symmetry flag.
    CauchyContext negated() const;

private:
    CxVector x_;
    bool c_symmetric_;
};

CxMatrix cauchy_matrix(const CauchyContext& ctx);

/// Generic product form of w_1..w_N.
CxVector w_values(const CauchyContext& ctx);

/// w_1..w_N from the half-size product that holds for C-symmetric x.
CxVector w_values_c_type(const CauchyContext& ctx);

cplx cauchy_det(const CauchyContext& ctx);

/// W(-x) C(-x) W(x).
CxMatrix cauchy_inverse(const CauchyContext& ctx);

struct PartialFraction {
    cplx lhs;
    cplx rhs;
};

/// Both sides of
///   prod_k (z - alpha_k) / prod_l (z - beta_l)
///     = delta_{M,N} + sum_j 1/(z - beta_j) prod_k (beta_j - alpha_k) / prod_{l != j} (beta_j - beta_l).
PartialFraction partial_fraction_check(const CxVector& alphas, const CxVector& betas, cplx z);

/// Largest residuals of the Cauchy/w identities at one point. Fields that
/// need C-symmetric x are empty otherwise.
struct IdentityReport {
    double w_sum_against_cauchy = 0.0;   // max_k |sum_j w_j/(1 + x_j - x_k) - 1|
    double trace_w = 0.0;                // |sum_j w_j - N|
    double inverse = 0.0;                // ||C(x) W(-x) C(-x) W(x) - 1||
    std::optional<double> w_half_sum;    // |sum_j w_j/(1 + 2 x_j)|
    std::optional<double> w_half_shift;  // max_k |sum_j w_j/((1+x_j-x_k)(1+2x_j)) + 1/(1-2x_k)|
    std::optional<double> cwc;           // ||C W(x) C - W(-x)||
    std::optional<double> ccc;           // ||C C(x) C - C(-x)||
    std::optional<double> involution;    // ||(C(x) C W(x))^2 - 1||
    std::optional<double> c_type_w;      // max |w_j - w_j (half-size product)|

    double max_residual() const;
};

IdentityReport identity_suite(const CauchyContext& ctx);

}  // namespace cnduality
