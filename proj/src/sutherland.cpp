#include "cnduality/sutherland.hpp"

#include "cnduality/errors.hpp"
#include "cnduality/orbit.hpp"
#include "flow_guard.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace cnduality {

double hamiltonian_s(const SutherlandState& s, const CouplingParams& c, double margin) {
    validate(s, margin);
    const auto n = s.n();
    const double g2 = c.g() * c.g();
    const double gg2 = c.g2() * c.g2();
    double h = 0.5 * s.p.squaredNorm();
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const double sm = std::sinh(s.q(a) - s.q(b));
            const double sp = std::sinh(s.q(a) + s.q(b));
            h += g2 / (sm * sm) + g2 / (sp * sp);
        }
        const double s2 = std::sinh(2.0 * s.q(a));
        h += 0.5 * gg2 / (s2 * s2);
    }
    return h;
}

CxMatrix lax_l(const SutherlandState& s, const CouplingParams& c, double margin) {
    validate(s, margin);
    const auto n = s.n();
    const cplx I(0.0, 1.0);
    CxMatrix L = CxMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index a = 0; a < n; ++a) {
        L(a, a) = s.p(a);
        L(n + a, n + a) = -s.p(a);
        const cplx self = I * c.g2() / std::sinh(2.0 * s.q(a));
        L(a, n + a) = self;
        L(n + a, a) = -self;
        for (Eigen::Index b = 0; b < n; ++b) {
            if (b == a) continue;
            const cplx diff = -I * c.g() / std::sinh(s.q(a) - s.q(b));
            const cplx sum = I * c.g() / std::sinh(s.q(a) + s.q(b));
            L(a, b) = diff;
            L(n + a, n + b) = -diff;
            L(a, n + b) = sum;
            L(n + a, b) = -sum;
        }
    }
    return L;
}

RealVector action_variables(const SutherlandState& s, const CouplingParams& c, const SpectralTol& tol) {
    return eig_paired_p(lax_l(s, c), tol).positive_part;
}

double momentum_residual_s(const SutherlandState& s, const CouplingParams& c) {
    const CxMatrix L = lax_l(s, c);
    const CxMatrix y = paired_exp_diag(s.q);
    const CxMatrix rho = xi_of(orbit_vector_E(static_cast<std::size_t>(s.n())), c);
    return constraint_residual(y, L, rho);
}

namespace {

SutherlandState flow_s_at(const SutherlandState& s0, const CxMatrix& L0, const CxMatrix& grad, double t,
                          const SpectralTol& tol) {
    const auto n = s0.n();
    // B = eta_L e^Q eta_R^*, so e^{q_a} are the upper half of the singular
    // values and the columns of eta_R the matching right singular vectors.
    // Working on B rather than B B^* keeps the condition number at e^{2 max q}.
    const CxMatrix B = paired_exp_diag(s0.q) * expm(t * grad);
    if (group_residual(B) > tol.structure * std::max(1.0, B.squaredNorm()))
        throw Error(ErrorKind::StructureViolation, "solve_flow_s: propagated matrix left U(n,n)");
    const Eigen::JacobiSVD<CxMatrix> svd(B, Eigen::ComputeFullV);
    const RealVector& sigma = svd.singularValues();

    SutherlandState out;
    out.q = sigma.head(n).array().log().matrix();
    for (Eigen::Index a = 0; a < n; ++a) {
        const double next = a + 1 < n ? out.q(a + 1) : -out.q(a);
        if (!(out.q(a) - next > tol.gap)) {
            std::ostringstream os;
            os << "solve_flow_s: positions collide at t = " << t;
            throw Error(ErrorKind::RegularityViolation, os.str());
        }
    }
    out.p.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto w = svd.matrixV().col(a);
        out.p(a) = w.dot(L0 * w).real();  // Re(w^* L0 w), free of the column phase
    }
    require_chamber(out.q, kChamberMargin, "q(t)");
    return out;
}

}  // namespace

SutherlandState solve_flow_s_generated(const SutherlandState& s0, const CouplingParams& c,
                                       const CxMatrix& grad_at_L0, double t, const SpectralTol& tol) {
    const CxMatrix L0 = lax_l(s0, c);
    if (grad_at_L0.rows() != L0.rows() || grad_at_L0.cols() != L0.cols())
        throw Error(ErrorKind::InvalidDimension, "solve_flow_s: gradient has the wrong size");
    return detail::run_with_collision_report(
        [&](double tt) { return flow_s_at(s0, L0, grad_at_L0, tt, tol); }, t);
}

SutherlandState solve_flow_s(const SutherlandState& s0, const CouplingParams& c, double t,
                             const SpectralTol& tol) {
    return solve_flow_s_generated(s0, c, 0.5 * lax_l(s0, c), t, tol);
}

}  // namespace cnduality
