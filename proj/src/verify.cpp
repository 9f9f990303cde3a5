#include "cnduality/verify.hpp"

#include "cnduality/cauchy.hpp"
#include "cnduality/duality.hpp"
#include "cnduality/errors.hpp"
#include "cnduality/oracle.hpp"
#include "cnduality/orbit.hpp"
#include "cnduality/rsvd.hpp"
#include "cnduality/sampling.hpp"
#include "cnduality/sutherland.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace cnduality {

namespace {

const cplx I(0.0, 1.0);

using GradFn = std::function<CxMatrix(const CxMatrix&)>;

struct Ctx {
    const VerifyOptions& opt;
    Sampler rng;

    int structure_draws() const { return std::max(1, 5 * opt.draws / 2); }
    int base_draws() const { return std::max(1, opt.draws); }
    int bracket_draws() const { return std::max(1, opt.draws / 4); }
    int flow_draws() const { return std::max(1, opt.draws / 40); }

    Eigen::Index any_n() { return rng.integer(1, std::max(1, opt.n_max)); }
    Eigen::Index flow_n() { return rng.integer(1, std::clamp(opt.n_max, 1, 3)); }
    Eigen::Index bracket_n() { return opt.n_max >= 2 ? rng.integer(2, std::min(3, opt.n_max)) : 1; }

    GradFn grad() const {
        if (opt.grad_f1_override) return opt.grad_f1_override;
        return [](const CxMatrix& y) { return grad_f1(y); };
    }
};

using CheckFn = double (*)(Ctx&);

struct CheckSpec {
    const char* name;
    const char* anchor;
    double tolerance;
    CheckFn fn;
};

double rel(double residual, double scale) { return residual / std::max(1.0, std::abs(scale)); }

const std::vector<double>& flow_times() {
    static const std::vector<double> ts{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
    return ts;
}

double state_gap(const SutherlandState& a, const SutherlandState& b) {
    return std::max((a.q - b.q).cwiseAbs().maxCoeff(), (a.p - b.p).cwiseAbs().maxCoeff());
}

double state_gap(const RsvdState& a, const RsvdState& b) {
    return std::max((a.lambda - b.lambda).cwiseAbs().maxCoeff(), (a.theta - b.theta).cwiseAbs().maxCoeff());
}

RsvdState flow_r(const RsvdState& st0, const CouplingParams& c, const GradFn& grad, double t) {
    return solve_flow_r_generated(st0, c, grad(lax_a(st0, c).R), t);
}

SutherlandState reference_s() {
    return {RealVector::Constant(1, 0.5 * std::log(1.0 + std::sqrt(2.0))), RealVector::Zero(1)};
}

RsvdState reference_r() { return {RealVector::Constant(1, 1.0), RealVector::Zero(1)}; }

// Pole-free C-symmetric Cauchy data: alternately purely imaginary (the
// RSvD case) and generic complex.
CauchyContext draw_cauchy(Ctx& ctx, int k) {
    for (;;) {
        const auto n = ctx.any_n();
        CxVector half(n);
        for (Eigen::Index a = 0; a < n; ++a)
            half(a) = (k % 2 == 0) ? cplx(0.0, ctx.rng.uniform(-2.0, 2.0))
                                   : cplx(ctx.rng.uniform(-1.0, 1.0), ctx.rng.uniform(-1.0, 1.0));
        const CauchyContext cc = CauchyContext::c_symmetric_from_half(half);
        const CxVector& x = cc.x();
        double closest = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            closest = std::min({closest, std::abs(1.0 + 2.0 * x(j))});
            for (Eigen::Index l = 0; l < x.size(); ++l) {
                if (l == j) continue;
                closest = std::min({closest, std::abs(x(j) - x(l)), std::abs(1.0 + x(j) - x(l))});
            }
        }
        if (closest > 0.15) return cc;
    }
}

// --- Cauchy ---------------------------------------------------------------

double check_cauchy_identities(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.structure_draws() / 2; ++k) worst = std::max(worst, identity_suite(draw_cauchy(ctx, k)).max_residual());
    return worst;
}

double check_cauchy_determinant(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.structure_draws() / 2; ++k) {
        const CauchyContext cc = draw_cauchy(ctx, k);
        const cplx lu = cauchy_matrix(cc).partialPivLu().determinant();
        worst = std::max(worst, std::abs(cauchy_det(cc) - lu) / std::max(1.0, std::abs(lu)));
    }
    return worst;
}

double check_cauchy_reference(Ctx&) {
    CxVector x(2);
    x << -0.5 * I, 0.5 * I;
    const CauchyContext cc(x, true);
    const CxVector w = w_values(cc);
    const CxVector wc = w_values_c_type(cc);
    double r = std::abs(w(0) - cplx(1.0, 1.0)) + std::abs(w(1) - cplx(1.0, -1.0));
    r = std::max(r, std::abs(wc(0) - cplx(1.0, 1.0)) + std::abs(wc(1) - cplx(1.0, -1.0)));
    return std::max(r, std::abs(cauchy_det(cc) - 0.5));
}

// --- RSvD Lax matrix -------------------------------------------------------

template <class F>
double over_rsvd_sample(Ctx& ctx, F&& f) {
    double worst = 0.0;
    for (int k = 0; k < ctx.structure_draws(); ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.05, 3.0);
        const RsvdState st = ctx.rng.rsvd(n, c);
        worst = std::max(worst, f(st, c));
    }
    return worst;
}

double check_lax_group(Ctx& ctx) {
    return over_rsvd_sample(ctx, [](const RsvdState& st, const CouplingParams& c) {
        const CxMatrix A = lax_a_compact(st, c);
        const CxMatrix C = build_C(static_cast<std::size_t>(st.n()));
        return (A * C * A - C).norm() / A.squaredNorm();
    });
}

double check_lax_positive(Ctx& ctx) {
    return over_rsvd_sample(ctx, [](const RsvdState& st, const CouplingParams& c) {
        const CxMatrix A = lax_a_compact(st, c);
        const RealVector mu = Eigen::SelfAdjointEigenSolver<CxMatrix>(A, Eigen::EigenvaluesOnly).eigenvalues();
        if (!(mu(0) > 0.0)) return std::numeric_limits<double>::infinity();
        double r = 0.0;
        const auto N = mu.size();
        for (Eigen::Index k = 0; k < N / 2; ++k) r = std::max(r, std::abs(mu(k) * mu(N - 1 - k) - 1.0));
        return r;
    });
}

double check_orbit_vector(Ctx& ctx) {
    return over_rsvd_sample(ctx, [](const RsvdState& st, const CouplingParams& c) {
        const RsvdLaxBundle b = lax_a(st, c);
        const auto n = st.n();
        const double norm_gap = std::abs(b.V.squaredNorm() - 2.0 * static_cast<double>(n));
        const double c_gap = (b.V.head(n) + b.V.tail(n)).norm() * std::sqrt(2.0);
        return std::max(norm_gap, c_gap);
    });
}

double check_lax_assembly(Ctx& ctx) {
    return over_rsvd_sample(ctx, [](const RsvdState& st, const CouplingParams& c) {
        const CxMatrix A = lax_a_compact(st, c);
        return rel((A - lax_a_blockwise(st, c)).cwiseAbs().maxCoeff(), A.cwiseAbs().maxCoeff());
    });
}

double check_z_via_w(Ctx& ctx) {
    return over_rsvd_sample(ctx, [](const RsvdState& st, const CouplingParams& c) {
        const CxVector z = z_values(st, c);
        return rel((z - z_values_via_w(st, c)).cwiseAbs().maxCoeff(), z.cwiseAbs().maxCoeff());
    });
}

double check_acf(Ctx& ctx) {
    return over_rsvd_sample(ctx, [](const RsvdState& st, const CouplingParams& c) {
        const CxMatrix A = lax_a_compact(st, c);
        const CxVector F = f_vector(st, c);
        const CxMatrix C = build_C(static_cast<std::size_t>(st.n()));
        return rel((A * C * F + F).norm(), A.norm() * F.norm());
    });
}

// --- Hamiltonians ----------------------------------------------------------

double check_sutherland_trace(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.structure_draws(); ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.05, 3.0);
        const SutherlandState s = ctx.rng.sutherland(n, c);
        const CxMatrix L = lax_l(s, c);
        const double h = hamiltonian_s(s, c);
        worst = std::max(worst, rel(std::abs(0.25 * (L * L).trace().real() - h), h));
    }
    return worst;
}

double check_rsvd_trace(Ctx& ctx) {
    return over_rsvd_sample(ctx, [](const RsvdState& st, const CouplingParams& c) {
        const double h = hamiltonian_r(st, c);
        return rel(std::abs(0.5 * lax_a_compact(st, c).trace().real() - h), h);
    });
}

double check_hamiltonian_reference(Ctx&) {
    const CouplingParams c(1.0, 1.0);
    return std::max(std::abs(hamiltonian_s(reference_s(), c) - 0.5),
                    std::abs(hamiltonian_r(reference_r(), c) - std::sqrt(2.0)));
}

// --- Constraint surface ----------------------------------------------------

double check_constraint_s(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.base_draws(); ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 3.0);
        worst = std::max(worst, momentum_residual_s(ctx.rng.sutherland(n, c), c));
    }
    return worst;
}

double check_constraint_r(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.base_draws(); ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 3.0);
        worst = std::max(worst, momentum_residual_r(ctx.rng.rsvd(n, c), c));
    }
    return worst;
}

double check_constraint_reference(Ctx& ctx) {
    // n = 1: (y L y^{-1})_+ = i g2 C = -xi(E) at every Sutherland point.
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
        const CouplingParams c = ctx.rng.couplings(0.25, 3.0);
        const SutherlandState s = ctx.rng.sutherland(1, c);
        const CxMatrix y = paired_exp_diag(s.q);
        const CxMatrix plus = decompose_kp(y * lax_l(s, c) * y.inverse()).plus;
        const CxMatrix C = build_C(1);
        const CxMatrix xiE = xi_of(orbit_vector_E(1), c);
        worst = std::max({worst, (plus - I * c.g2() * C).norm(), (xiE + I * c.g2() * C).norm()});
    }
    return worst;
}

// --- Duality ---------------------------------------------------------------

double check_roundtrip_s(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.base_draws(); ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 3.0);
        const SutherlandState s = ctx.rng.sutherland(n, c);
        worst = std::max(worst, state_gap(dualize_r_to_s(dualize_s_to_r(s, c), c), s));
    }
    return worst;
}

double check_roundtrip_r(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.base_draws(); ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 3.0);
        const RsvdState st = ctx.rng.rsvd(n, c);
        worst = std::max(worst, state_gap(dualize_s_to_r(dualize_r_to_s(st, c), c), st));
    }
    return worst;
}

double check_duality_reference(Ctx&) {
    const CouplingParams c(1.0, 1.0);
    return std::max(state_gap(dualize_s_to_r(reference_s(), c), reference_r()),
                    state_gap(dualize_r_to_s(reference_r(), c), reference_s()));
}

// --- Poisson brackets ------------------------------------------------------

// Largest deviation of {action_a, action_b}, {angle_a, action_b} - delta/2
// and {angle_a, angle_b} from zero, where `coords` maps a phase point to
// (action, angle).
template <class Coords>
double bracket_deviation(const PhasePoint& pt, Eigen::Index n, Coords coords, const PhaseDomain& domain) {
    auto field = [&](bool angle, Eigen::Index a) -> PhaseField {
        return [=](const PhasePoint& p) {
            const ActionAngle aa = coords(p);
            return angle ? aa.angle(a) : aa.action(a);
        };
    };
    const double step = 1e-5;
    double worst = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const double delta = (a == b) ? BracketConvention::scale : 0.0;
            if (a < b) {
                worst = std::max(worst, std::abs(fd_poisson(field(false, a), field(false, b), pt, step, domain)));
                worst = std::max(worst, std::abs(fd_poisson(field(true, a), field(true, b), pt, step, domain)));
            }
            worst = std::max(worst, std::abs(fd_poisson(field(true, a), field(false, b), pt, step, domain) - delta));
        }
    }
    return worst;
}

double check_brackets_s(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.bracket_draws(); ++k) {
        const auto n = ctx.bracket_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 2.0);
        const SutherlandState s = ctx.rng.sutherland(n, c);
        // Sutherland side: angle theta_hat is the coordinate-like function.
        auto coords = [&c](const PhasePoint& p) { return pullback_coords(sutherland_from_phase_point(p), c); };
        worst = std::max(worst, bracket_deviation(to_phase_point(s), n, coords, in_sutherland_domain));
    }
    return worst;
}

double check_brackets_r(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.bracket_draws(); ++k) {
        const auto n = ctx.bracket_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 2.0);
        const RsvdState st = ctx.rng.rsvd(n, c);
        // RSvD side: q_check plays the coordinate, p_check its momentum.
        auto coords = [&c](const PhasePoint& p) {
            const ActionAngle qp = pullback_coords_r(rsvd_from_phase_point(p), c);
            return ActionAngle{qp.angle, qp.action};
        };
        worst = std::max(worst, bracket_deviation(to_phase_point(st), n, coords, in_rsvd_domain));
    }
    return worst;
}

// --- Flows -----------------------------------------------------------------

Rk4Options oracle_options() {
    Rk4Options o;
    o.dt = 1e-3;
    o.richardson_target = 1e-7;
    return o;
}

double check_flow_s_vs_rk4(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.flow_draws(); ++k) {
        const auto n = ctx.flow_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 1.0);
        const SutherlandState s0 = ctx.rng.sutherland(n, c);
        const auto traj = rk4_sutherland_at(s0, c, flow_times(), oracle_options());
        for (std::size_t i = 0; i < traj.t.size(); ++i)
            worst = std::max(worst, state_gap(solve_flow_s(s0, c, traj.t[i]), traj.states[i]));
    }
    return worst;
}

double check_flow_r_vs_rk4(Ctx& ctx) {
    const GradFn grad = ctx.grad();
    double worst = 0.0;
    for (int k = 0; k < ctx.flow_draws(); ++k) {
        const auto n = ctx.flow_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 1.0);
        const RsvdState st0 = ctx.rng.rsvd(n, c);
        const auto traj = rk4_rsvd_at(st0, c, flow_times(), oracle_options());
        for (std::size_t i = 0; i < traj.t.size(); ++i)
            worst = std::max(worst, state_gap(flow_r(st0, c, grad, traj.t[i]), traj.states[i]));
    }
    return worst;
}

double check_conservation_s(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.flow_draws() * 4; ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 2.0);
        const SutherlandState s0 = ctx.rng.sutherland(n, c);
        const double h0 = hamiltonian_s(s0, c);
        const RealVector act0 = action_variables(s0, c);
        for (const double t : flow_times()) {
            const SutherlandState s = solve_flow_s(s0, c, t);
            worst = std::max(worst, rel(std::abs(hamiltonian_s(s, c) - h0), h0));
            worst = std::max(worst, rel((action_variables(s, c) - act0).cwiseAbs().maxCoeff(), act0(0)));
        }
    }
    return worst;
}

double check_conservation_r(Ctx& ctx) {
    const GradFn grad = ctx.grad();
    double worst = 0.0;
    for (int k = 0; k < ctx.flow_draws() * 4; ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 2.0);
        const RsvdState st0 = ctx.rng.rsvd(n, c);
        const double h0 = hamiltonian_r(st0, c);
        const RealVector act0 = dual_actions(st0, c);
        for (const double t : flow_times()) {
            const RsvdState st = flow_r(st0, c, grad, t);
            worst = std::max(worst, rel(std::abs(hamiltonian_r(st, c) - h0), h0));
            worst = std::max(worst, rel((dual_actions(st, c) - act0).cwiseAbs().maxCoeff(), act0(0)));
        }
    }
    return worst;
}

double check_rk4_energy(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.flow_draws(); ++k) {
        const auto n = ctx.flow_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 1.0);
        const SutherlandState s0 = ctx.rng.sutherland(n, c);
        const RsvdState st0 = ctx.rng.rsvd(n, c);
        const double hs = hamiltonian_s(s0, c);
        const double hr = hamiltonian_r(st0, c);
        for (const auto& s : rk4_sutherland_at(s0, c, flow_times(), oracle_options()).states)
            worst = std::max(worst, std::abs(hamiltonian_s(s, c) - hs));
        for (const auto& st : rk4_rsvd_at(st0, c, flow_times(), oracle_options()).states)
            worst = std::max(worst, std::abs(hamiltonian_r(st, c) - hr));
    }
    return worst;
}

double check_flow_r_reference(Ctx& ctx) {
    const GradFn grad = ctx.grad();
    const CouplingParams c(1.0, 1.0);
    double worst = 0.0;
    for (const double t : {0.5, 1.0, 2.0})
        worst = std::max(worst, std::abs(flow_r(reference_r(), c, grad, t).lambda(0) - std::sqrt(1.0 + t * t)));
    return worst;
}

double check_linearization_s(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.flow_draws() * 4; ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 2.0);
        const SutherlandState s0 = ctx.rng.sutherland(n, c);
        const ActionAngle aa0 = pullback_coords(s0, c);
        for (const double t : flow_times()) {
            const ActionAngle aa = pullback_coords(solve_flow_s(s0, c, t), c);
            worst = std::max(worst, (aa.action - aa0.action).cwiseAbs().maxCoeff());
            worst = std::max(worst, (aa.angle - aa0.angle - 0.5 * t * aa0.action).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

double check_linearization_r(Ctx& ctx) {
    const GradFn grad = ctx.grad();
    double worst = 0.0;
    auto chain = [&](const RsvdState& st0, const CouplingParams& c) {
        const ActionAngle qp0 = pullback_coords_r(st0, c);
        const RealVector rate = (2.0 * qp0.action).array().sinh();
        for (const double t : flow_times()) {
            const ActionAngle qp = pullback_coords_r(flow_r(st0, c, grad, t), c);
            worst = std::max(worst, (qp.action - qp0.action).cwiseAbs().maxCoeff());
            worst = std::max(worst, (qp.angle - qp0.angle + t * rate).cwiseAbs().maxCoeff());
        }
    };
    // Worked n = 1 chain first: there p_check(t) = -t exactly.
    chain(reference_r(), CouplingParams(1.0, 1.0));
    for (int k = 0; k < ctx.flow_draws() * 4; ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 2.0);
        chain(ctx.rng.rsvd(n, c), c);
    }
    return worst;
}

// --- Observables and the gradient -----------------------------------------

double check_observables(Ctx& ctx) {
    double worst = 0.0;
    for (int k = 0; k < ctx.base_draws() / 4 + 1; ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 2.0);
        const RsvdState st = ctx.rng.rsvd(n, c);
        for (int r = 1; r <= 6; ++r) {
            const Observables a = reduced_observables(st, c, r);
            const Observables b = trace_observables(st, c, r);
            worst = std::max({worst, rel(std::abs(a.phi - b.phi), a.phi), rel(std::abs(a.psi - b.psi), a.psi)});
        }
    }
    return worst;
}

double check_gradient_fd(Ctx& ctx) {
    const GradFn grad = ctx.grad();
    double worst = 0.0;
    for (int k = 0; k < ctx.bracket_draws(); ++k) {
        const auto n = ctx.any_n();
        const CouplingParams c = ctx.rng.couplings(0.25, 2.0);
        const CxMatrix y = lax_a(ctx.rng.rsvd(n, c), c).R;
        const auto N = y.rows();
        // xi = C K with K anti-Hermitian lies in u(n,n).
        CxMatrix K(N, N);
        for (Eigen::Index j = 0; j < N; ++j)
            for (Eigen::Index l = 0; l < N; ++l) K(j, l) = cplx(ctx.rng.uniform(-1.0, 1.0), ctx.rng.uniform(-1.0, 1.0));
        K = (0.5 * (K - K.adjoint())).eval();
        const CxMatrix xi = build_C(static_cast<std::size_t>(n)) * K / K.norm();
        auto f1 = [&](double s) {
            const CxMatrix ys = y * expm(s * xi);
            return 0.5 * (ys * ys.adjoint()).trace().real();
        };
        const double h = 1e-5;
        const double fd = (f1(h) - f1(-h)) / (2.0 * h);
        const double exact = (grad(y) * xi).trace().real();
        worst = std::max(worst, rel(std::abs(fd - exact), exact));
    }
    return worst;
}

const std::vector<CheckSpec>& registry() {
    static const std::vector<CheckSpec> specs{
        {"brackets.rsvd_side", "{q_a, q_b} = 0, {q_a, p_b} = delta_ab/2, {p_a, p_b} = 0 for the pulled-back (q, p)", 1e-4, check_brackets_r},
        {"brackets.sutherland_side", "{lambda_a, lambda_b} = 0, {theta_a, lambda_b} = delta_ab/2, {theta_a, theta_b} = 0 for the pulled-back (lambda, theta)", 1e-4, check_brackets_s},
        {"cauchy.determinant", "det C(x) = prod_{j<k} d^2/(d^2 - 1), d = x_j - x_k", 1e-9, check_cauchy_determinant},
        {"cauchy.identities", "sum_j w_j/(1 + x_j - x_k) = 1, sum_j w_j = N, C(x)^{-1} = W(-x) C(-x) W(x) and the C-symmetric forms", 1e-9, check_cauchy_identities},
        {"cauchy.reference_point", "x = (-i/2, i/2): w = (1 + i, 1 - i), det = 1/2", 1e-15, check_cauchy_reference},
        {"constraint.reference", "n = 1: (e^Q L e^{-Q})_+ = i g2 C = -xi(E)", 1e-12, check_constraint_reference},
        {"constraint.rsvd", "(y Y y^{-1})_+ + xi(V) = 0 at (A^{1/2}, diag(lambda, -lambda), xi(V))", 1e-8, check_constraint_r},
        {"constraint.sutherland", "(y Y y^{-1})_+ + xi(E) = 0 at (e^Q, L(q, p), xi(E))", 1e-8, check_constraint_s},
        {"duality.reference_pair", "(q, p) = (ln(1 + sqrt 2)/2, 0) <-> (lambda, theta) = (1, 0) at g = g2 = 1", 1e-10, check_duality_reference},
        {"duality.roundtrip_r2s2r", "S(S^{-1}(lambda, theta)) = (lambda, theta)", 1e-8, check_roundtrip_r},
        {"duality.roundtrip_s2r2s", "S^{-1}(S(q, p)) = (q, p)", 1e-8, check_roundtrip_s},
        {"flows.rk4_energy", "RK4 energy drift for both Hamiltonians over t in [0, 2]", 1e-6, check_rk4_energy},
        {"flows.rsvd_conservation", "H_R and spec(A) constant along the projected linear flow", 1e-8, check_conservation_r},
        {"flows.rsvd_reference", "n = 1, g = g2 = 1: lambda(t) = sqrt(1 + t^2)", 1e-8, check_flow_r_reference},
        {"flows.rsvd_vs_rk4", "diag(lambda, -lambda) - t grad f1(A^{1/2}) flow equals Hamilton's equations for H_R", 1e-5, check_flow_r_vs_rk4},
        {"flows.sutherland_conservation", "H_S and spec(L) constant along the projected geodesic flow", 1e-8, check_conservation_s},
        {"flows.sutherland_vs_rk4", "e^Q e^{t L/2} flow equals Hamilton's equations for H_S", 1e-5, check_flow_s_vs_rk4},
        {"gradient.fd", "d/ds tr(y(s) y(s)^*)/2 = tr(grad f1(y) xi) along y e^{s xi}", 1e-6, check_gradient_fd},
        {"hamiltonian.reference_values", "n = 1 reference points: H_S = 1/2, H_R = sqrt 2", 1e-12, check_hamiltonian_reference},
        {"hamiltonian.rsvd_trace", "tr(A)/2 = H_R", 1e-10, check_rsvd_trace},
        {"hamiltonian.sutherland_trace", "tr(L^2)/4 = H_S", 1e-10, check_sutherland_trace},
        {"linearization.rsvd", "q constant and p(t) = p(0) - t sinh(2q) along the H_R flow", 1e-6, check_linearization_r},
        {"linearization.sutherland", "lambda constant and theta(t) = theta(0) + t lambda/2 along the H_S flow", 1e-6, check_linearization_s},
        {"observables.trace_forms", "closed forms of phi_r, Psi_r equal tr(Y^r) + tr(Y^{*r}) and tr(Y^r y^* Z y) + c.c., r <= 6", 1e-8, check_observables},
        {"rsvd.acf", "A C F = -F", 1e-9, check_acf},
        {"rsvd.lax_assembly", "compact (F_k conj(F_l) + eps C_kl)/(1 + x_k - x_l) equals the blockwise entries", 1e-10, check_lax_assembly},
        {"rsvd.lax_group", "A C A = C", 1e-9, check_lax_group},
        {"rsvd.lax_positive", "A > 0 and spec(A) pairs as e^{2q}, e^{-2q}", 1e-9, check_lax_positive},
        {"rsvd.orbit_vector", "V^* V = N and C V + V = 0", 1e-9, check_orbit_vector},
        {"rsvd.z_via_w", "z_a = -w_a(x)(1 - eps/(1 + 2 x_a))", 1e-10, check_z_via_w},
    };
    return specs;
}

CheckRecord execute(const CheckSpec& spec, const VerifyOptions& opt) {
    CheckRecord rec;
    rec.name = spec.name;
    rec.anchor = spec.anchor;
    rec.tolerance = spec.tolerance;
    if (const auto it = opt.tol_overrides.find(rec.name); it != opt.tol_overrides.end()) rec.tolerance = it->second;
    Ctx ctx{opt, Sampler(opt.seed, spec.name)};
    try {
        rec.max_residual = spec.fn(ctx);
    } catch (const std::exception& e) {
        rec.max_residual = std::numeric_limits<double>::infinity();
        rec.error = e.what();
    }
    rec.pass = rec.error.empty() && rec.max_residual <= rec.tolerance;
    return rec;
}

}  // namespace

bool VerifyReport::all_pass() const noexcept {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.pass; });
}

std::vector<std::string> check_names() {
    std::vector<std::string> names;
    for (const auto& s : registry()) names.emplace_back(s.name);
    std::sort(names.begin(), names.end());
    return names;
}

CheckRecord run_check(const std::string& name, const VerifyOptions& opt) {
    for (const auto& s : registry())
        if (name == s.name) return execute(s, opt);
    throw Error(ErrorKind::ConfigError, "unknown check '" + name + "'");
}

int threads_from_env() {
    const char* env = std::getenv("CN_DUALITY_THREADS");
    if (env == nullptr) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) return 1;
    return static_cast<int>(std::min(v, 256L));
}

VerifyReport run_verify(const VerifyOptions& opt) {
    for (const auto& [name, tol] : opt.tol_overrides) {
        (void)tol;
        const auto names = check_names();
        if (!std::binary_search(names.begin(), names.end(), name))
            throw Error(ErrorKind::ConfigError, "tolerance override for unknown check '" + name + "'");
    }
    if (opt.n_max < 1) throw Error(ErrorKind::ConfigError, "n_max must be at least 1");
    if (opt.draws < 1) throw Error(ErrorKind::ConfigError, "draws must be at least 1");

    const auto& specs = registry();
    std::vector<CheckRecord> records(specs.size());
    const int threads = std::max(1, std::min<int>(opt.threads > 0 ? opt.threads : threads_from_env(),
                                                  static_cast<int>(specs.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) records[i] = execute(specs[i], opt);
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    VerifyReport report;
    report.seed = opt.seed;
    report.n_max = opt.n_max;
    report.draws = opt.draws;
    report.checks = std::move(records);
    std::sort(report.checks.begin(), report.checks.end(),
              [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    return report;
}

}  // namespace cnduality
