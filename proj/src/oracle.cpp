#include "cnduality/oracle.hpp"

#include "cnduality/errors.hpp"
#include "cnduality/rsvd.hpp"
#include "cnduality/sutherland.hpp"

#include <cmath>
#include <sstream>

namespace cnduality {

PhasePoint to_phase_point(const SutherlandState& s) { return {s.q, s.p}; }
PhasePoint to_phase_point(const RsvdState& st) { return {st.theta, st.lambda}; }
SutherlandState sutherland_from_phase_point(const PhasePoint& pt) { return {pt.x, pt.y}; }
RsvdState rsvd_from_phase_point(const PhasePoint& pt) { return {pt.y, pt.x}; }

bool in_sutherland_domain(const PhasePoint& pt) { return pt.y.allFinite() && in_chamber(pt.x); }
bool in_rsvd_domain(const PhasePoint& pt) { return pt.x.allFinite() && in_chamber(pt.y); }

double fd_poisson(const PhaseField& f, const PhaseField& h, const PhasePoint& pt, double step,
                  const PhaseDomain& domain) {
    if (!(step > 0.0)) throw Error(ErrorKind::DomainError, "fd_poisson: step must be positive");
    const auto n = pt.x.size();
    if (pt.y.size() != n) throw Error(ErrorKind::InvalidDimension, "fd_poisson: x and y differ in length");

    auto eval_pair = [&](PhasePoint p) {
        if (domain && !domain(p)) throw Error(ErrorKind::DomainError, "fd_poisson: stencil leaves the domain");
        return std::pair<double, double>{f(p), h(p)};
    };
    // Partial derivatives of (f, h) along one slot.
    auto partial = [&](bool in_x, Eigen::Index a) {
        PhasePoint plus = pt;
        PhasePoint minus = pt;
        (in_x ? plus.x : plus.y)(a) += step;
        (in_x ? minus.x : minus.y)(a) -= step;
        const auto fp = eval_pair(plus);
        const auto fm = eval_pair(minus);
        return std::pair<double, double>{(fp.first - fm.first) / (2.0 * step), (fp.second - fm.second) / (2.0 * step)};
    };

    double sum = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto dx = partial(true, a);
        const auto dy = partial(false, a);
        sum += dx.first * dy.second - dy.first * dx.second;
    }
    return BracketConvention::scale * sum;
}

RealVector sutherland_grad_q(const SutherlandState& s, const CouplingParams& c) {
    validate(s);
    const auto n = s.n();
    const double g2 = c.g() * c.g();
    const double gg2 = c.g2() * c.g2();
    // d/du sinh^{-2}(u) = -2 cosh(u) / sinh^3(u)
    auto dinv2 = [](double u) {
        const double sh = std::sinh(u);
        return -2.0 * std::cosh(u) / (sh * sh * sh);
    };
    RealVector grad(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        double acc = 2.0 * 0.5 * gg2 * dinv2(2.0 * s.q(a));
        for (Eigen::Index b = 0; b < n; ++b) {
            if (b == a) continue;
            acc += g2 * (dinv2(s.q(a) - s.q(b)) + dinv2(s.q(a) + s.q(b)));
        }
        grad(a) = acc;
    }
    return grad;
}

std::pair<RealVector, RealVector> rsvd_grad_fd(const RsvdState& st, const CouplingParams& c, double step) {
    const auto n = st.n();
    RealVector d_lambda(n);
    RealVector d_theta(n);
    // The stencil may step up to `step` towards a wall, so only require the
    // bare chamber there.
    const double margin = 0.0;
    RsvdState probe = st;
    auto central = [&](double& slot, double base) {
        slot = base + step;
        const double hp = hamiltonian_r(probe, c, margin);
        slot = base - step;
        const double hm = hamiltonian_r(probe, c, margin);
        slot = base;
        return (hp - hm) / (2.0 * step);
    };
    for (Eigen::Index a = 0; a < n; ++a) {
        d_lambda(a) = central(probe.lambda(a), st.lambda(a));
        d_theta(a) = central(probe.theta(a), st.theta(a));
    }
    return {d_lambda, d_theta};
}

namespace {

// Flat layout z = (x, y) with x the coordinate and y the momentum slot.
using Field = std::function<RealVector(const RealVector&)>;
using Inside = std::function<bool(const RealVector&)>;

struct Stepper {
    Field field;
    Inside inside;
    int max_halvings;

    // One classical RK4 step; false if a stage left the domain.
    bool try_step(RealVector& z, double h) const {
        try {
            const RealVector k1 = field(z);
            const RealVector k2 = field(z + 0.5 * h * k1);
            const RealVector k3 = field(z + 0.5 * h * k2);
            const RealVector k4 = field(z + h * k3);
            RealVector next = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!next.allFinite() || !inside(next)) return false;
            z = std::move(next);
            return true;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::DomainError) return false;
            throw;
        }
    }

    // Advances by h, splitting the step in halves wherever a stage fails.
    // Returns false (with t at the last accepted time) when splitting runs out.
    bool advance(RealVector& z, double& t, double h, int depth) const {
        if (try_step(z, h)) {
            t += h;
            return true;
        }
        if (depth >= max_halvings) return false;
        return advance(z, t, 0.5 * h, depth + 1) && advance(z, t, 0.5 * h, depth + 1);
    }
};

template <class State, class ToState>
Trajectory<State> integrate(const RealVector& z0, const Stepper& stepper, const std::vector<double>& times,
                            const Rk4Options& opt, ToState to_state) {
    if (!(opt.dt > 0.0)) throw Error(ErrorKind::DomainError, "rk4: dt must be positive");
    Trajectory<State> traj;
    RealVector z = z0;
    double t = 0.0;
    for (const double target : times) {
        if (!(target >= t - 1e-12)) throw Error(ErrorKind::DomainError, "rk4: sample times must be non-decreasing and >= 0");
        const double span = target - t;
        if (span > 0.0) {
            const auto steps = static_cast<long>(std::ceil(span / opt.dt - 1e-9));
            const double h = span / static_cast<double>(std::max(1L, steps));
            const double seg_start = t;
            for (long k = 0; k < std::max(1L, steps); ++k) {
                double tt = t;
                if (!stepper.advance(z, tt, h, 0)) {
                    std::ostringstream os;
                    os.precision(17);
                    os << "rk4: trajectory reached a chamber wall near t = " << tt;
                    if (!opt.keep_partial) throw Error(ErrorKind::IntegrationAborted, os.str(), tt);
                    traj.aborted = true;
                    traj.last_safe_t = tt;
                    traj.abort_reason = os.str();
                    return traj;
                }
                t = seg_start + static_cast<double>(k + 1) * h;
            }
        }
        t = std::max(t, target);
        traj.t.push_back(target);
        traj.states.push_back(to_state(z));
        traj.last_safe_t = target;
    }
    return traj;
}

template <class State>
double max_state_gap(const State& a, const State& b);

template <>
double max_state_gap(const SutherlandState& a, const SutherlandState& b) {
    return std::max((a.q - b.q).cwiseAbs().maxCoeff(), (a.p - b.p).cwiseAbs().maxCoeff());
}

template <>
double max_state_gap(const RsvdState& a, const RsvdState& b) {
    return std::max((a.lambda - b.lambda).cwiseAbs().maxCoeff(), (a.theta - b.theta).cwiseAbs().maxCoeff());
}

template <class State>
void attach_richardson(Trajectory<State>& coarse, const Trajectory<State>& fine) {
    double err = 0.0;
    const auto m = std::min(coarse.states.size(), fine.states.size());
    for (std::size_t i = 0; i < m; ++i) err = std::max(err, max_state_gap(coarse.states[i], fine.states[i]));
    coarse.richardson_error = err / 15.0;
}

std::vector<double> uniform_steps(double t_end, double dt) {
    if (!(t_end >= 0.0) || !(dt > 0.0)) throw Error(ErrorKind::DomainError, "rk4: need t_end >= 0 and dt > 0");
    const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(steps) + 1);
    for (long k = 0; k <= steps; ++k) times.push_back(std::min(t_end, static_cast<double>(k) * dt));
    return times;
}

// Plain run, a single dt/2 comparison, or repeated halving until the
// Richardson estimate meets the target.
template <class State, class ToState>
Trajectory<State> run_refined(const RealVector& z0, const Stepper& stepper, const std::vector<double>& times,
                              const Rk4Options& opt, ToState to_state) {
    Rk4Options cur = opt;
    auto coarse = integrate<State>(z0, stepper, times, cur, to_state);
    coarse.dt = cur.dt;
    if (!(opt.richardson || opt.richardson_target > 0.0) || coarse.aborted) return coarse;

    for (int level = 0;; ++level) {
        Rk4Options half = cur;
        half.dt = 0.5 * cur.dt;
        auto fine = integrate<State>(z0, stepper, times, half, to_state);
        fine.dt = half.dt;
        const bool refine = opt.richardson_target > 0.0 && !fine.aborted && level < opt.max_refinements;
        if (!refine) {
            attach_richardson(coarse, fine);
            return coarse;
        }
        attach_richardson(fine, coarse);
        if (fine.richardson_error <= opt.richardson_target) return fine;
        coarse = std::move(fine);
        cur = half;
    }
}

}  // namespace

Trajectory<SutherlandState> rk4_sutherland_at(const SutherlandState& s0, const CouplingParams& c,
                                              const std::vector<double>& times, const Rk4Options& opt) {
    validate(s0);
    const auto n = s0.n();
    Stepper stepper;
    stepper.max_halvings = opt.max_halvings;
    stepper.inside = [n](const RealVector& z) { return in_chamber(z.head(n)); };
    stepper.field = [n, &c](const RealVector& z) {
        const SutherlandState s{z.head(n), z.tail(n)};
        RealVector dz(2 * n);
        dz.head(n) = 0.5 * s.p;
        dz.tail(n) = -0.5 * sutherland_grad_q(s, c);
        return dz;
    };
    RealVector z0(2 * n);
    z0 << s0.q, s0.p;
    auto to_state = [n](const RealVector& z) { return SutherlandState{z.head(n), z.tail(n)}; };
    return run_refined<SutherlandState>(z0, stepper, times, opt, to_state);
}

Trajectory<RsvdState> rk4_rsvd_at(const RsvdState& st0, const CouplingParams& c, const std::vector<double>& times,
                                  const Rk4Options& opt) {
    validate(st0);
    const auto n = st0.n();
    Stepper stepper;
    stepper.max_halvings = opt.max_halvings;
    stepper.inside = [n](const RealVector& z) { return in_chamber(z.tail(n)); };
    stepper.field = [n, &c](const RealVector& z) {
        const RsvdState st{z.tail(n), z.head(n)};
        validate(st);
        const auto [d_lambda, d_theta] = rsvd_grad_fd(st, c);
        RealVector dz(2 * n);
        dz.head(n) = 0.5 * d_lambda;
        dz.tail(n) = -0.5 * d_theta;
        return dz;
    };
    RealVector z0(2 * n);
    z0 << st0.theta, st0.lambda;
    auto to_state = [n](const RealVector& z) { return RsvdState{z.tail(n), z.head(n)}; };
    return run_refined<RsvdState>(z0, stepper, times, opt, to_state);
}

Trajectory<SutherlandState> rk4_sutherland(const SutherlandState& s0, const CouplingParams& c, double t_end,
                                           double dt) {
    Rk4Options opt;
    opt.dt = dt;
    return rk4_sutherland_at(s0, c, uniform_steps(t_end, dt), opt);
}

Trajectory<RsvdState> rk4_rsvd(const RsvdState& st0, const CouplingParams& c, double t_end, double dt) {
    Rk4Options opt;
    opt.dt = dt;
    return rk4_rsvd_at(st0, c, uniform_steps(t_end, dt), opt);
}

}  // namespace cnduality
