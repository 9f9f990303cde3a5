#include "check_error.hpp"
#include "support.hpp"

#include "cnduality/duality.hpp"
#include "cnduality/oracle.hpp"
#include "cnduality/orbit.hpp"
#include "cnduality/sutherland.hpp"

using namespace cnduality;
using testkit::Gen;
using testkit::I;
using testkit::kRefQ;

namespace {

SutherlandState ref_state(double p = 0.0) {
    SutherlandState s;
    s.q = RealVector::Constant(1, kRefQ);
    s.p = RealVector::Constant(1, p);
    return s;
}

const CouplingParams kUnit{1.0, 1.0};

double state_distance(const SutherlandState& a, const SutherlandState& b) {
    return std::max(testkit::max_abs(a.q - b.q), testkit::max_abs(a.p - b.p));
}

}  // namespace

TEST_CASE("coupling parameters") {
    CHECK_ERROR_KIND(CouplingParams(0.0, 1.0), ErrorKind::DomainError);
    CHECK_ERROR_KIND(CouplingParams(1.0, 0.0), ErrorKind::DomainError);
    CHECK(CouplingParams(2.0, 1.0).eps() == doctest::Approx(0.5));
    CHECK(CouplingParams(0.7, 1.4).at_exceptional_ratio());
    CHECK_FALSE(CouplingParams(0.7, 1.3).at_exceptional_ratio());
}

TEST_CASE("hamiltonian_s examples") {
    CHECK(hamiltonian_s(ref_state(), kUnit) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(hamiltonian_s(ref_state(3.0), kUnit) == doctest::Approx(5.0).epsilon(1e-14));

    SutherlandState bad;
    bad.q = RealVector(2);
    bad.q << 0.5, 0.9;
    bad.p = RealVector::Zero(2);
    CHECK_ERROR_KIND(hamiltonian_s(bad, kUnit), ErrorKind::DomainError);
    CHECK_ERROR_KIND(lax_l(bad, kUnit), ErrorKind::DomainError);
    bad.q << 0.9, 0.0;
    CHECK_ERROR_KIND(hamiltonian_s(bad, kUnit), ErrorKind::DomainError);
}

TEST_CASE("lax_l examples") {
    CxMatrix expect(2, 2);
    expect << 0.0, I, -I, 0.0;
    CHECK((lax_l(ref_state(), kUnit) - expect).norm() < 1e-15);
    expect << 2.0, I, -I, -2.0;
    CHECK((lax_l(ref_state(2.0), kUnit) - expect).norm() < 1e-15);
}

TEST_CASE("action_variables examples") {
    CHECK(action_variables(ref_state(), kUnit)(0) == doctest::Approx(1.0).epsilon(1e-14));
    Gen gen(1);
    for (int trial = 0; trial < 20; ++trial) {
        const CouplingParams c = gen.couplings();
        const SutherlandState s = gen.sutherland(1, c);
        const double expect =
            std::sqrt(s.p(0) * s.p(0) + c.g2() * c.g2() / std::pow(std::sinh(2.0 * s.q(0)), 2));
        CHECK(action_variables(s, c)(0) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("momentum_residual_s examples") {
    CHECK(momentum_residual_s(ref_state(), kUnit) < 1e-14);
    // By hand at the reference point: (e^Q L e^{-Q})_+ = i g2 C and xi(E) = -i g2 C.
    const SutherlandState s = ref_state();
    const CxMatrix y = paired_exp_diag(s.q);
    const CxMatrix Y = lax_l(s, kUnit);
    const CxMatrix plus = decompose_kp(y * Y * y.inverse()).plus;
    CHECK((plus - I * build_C(1)).norm() < 1e-14);
    CHECK((xi_of(orbit_vector_E(1), kUnit) + I * build_C(1)).norm() < 1e-15);

    Gen gen(2);
    for (int trial = 0; trial < 50; ++trial) {
        const CouplingParams c = gen.couplings();
        SutherlandState st = gen.sutherland(3, c);
        const double r = momentum_residual_s(st, c);
        CHECK(r <= 1e-10 * (1.0 + lax_l(st, c).norm()));
        st.p = -st.p;
        CHECK(momentum_residual_s(st, c) <= 1e-10 * (1.0 + lax_l(st, c).norm()));
    }
}

TEST_CASE("solve_flow_s examples") {
    Gen gen(3);
    const CouplingParams c = gen.couplings();
    const SutherlandState s0 = gen.sutherland(3, c);
    CHECK(state_distance(solve_flow_s(s0, c, 0.0), s0) <= 1e-12);

    // Reference point: the dual angle advances as t * lambda_hat / 2 = t / 2.
    for (const double t : {0.25, 1.0, 2.5}) {
        const auto aa = pullback_coords(solve_flow_s(ref_state(), kUnit, t), kUnit);
        CHECK(aa.action(0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(aa.angle(0) - t / 2.0) <= 1e-10);
    }

    // Random n = 2 against the RK4 oracle.
    const CouplingParams c2 = gen.couplings(0.3, 1.0);
    const SutherlandState s2 = gen.sutherland(2, c2);
    Rk4Options opt;
    opt.richardson_target = 1e-8;
    const auto traj = rk4_sutherland_at(s2, c2, {0.5, 1.0, 2.0}, opt);
    REQUIRE(traj.states.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(state_distance(solve_flow_s(s2, c2, traj.t[k]), traj.states[k]) <= 1e-6);
}

TEST_CASE("velocity convention: dq/dt = p/2") {
    Gen gen(4);
    for (int trial = 0; trial < 10; ++trial) {
        const CouplingParams c = gen.couplings();
        const SutherlandState s = gen.sutherland(gen.pick(1, 3), c);
        const double h = 1e-5;
        const RealVector v = (solve_flow_s(s, c, h).q - solve_flow_s(s, c, -h).q) / (2.0 * h);
        CHECK(testkit::max_abs(v - 0.5 * s.p) <= 1e-7 * (1.0 + testkit::max_abs(s.p)));
    }
}

TEST_CASE("property: Lax matrix structure and energy") {
    Gen gen(5);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = gen.pick(1, 4);
        const CouplingParams c = gen.couplings(0.05, 3.0);
        const SutherlandState s = gen.sutherland(n, c);
        const CxMatrix L = lax_l(s, c);
        CHECK((L - testkit::ref_lax_l(s, c)).norm() <= 1e-13 * L.norm());
        CHECK(hermitian_residual(L) <= 1e-12);
        CHECK(anticommutator_residual_C(L) <= 1e-12);
        const double h = hamiltonian_s(s, c);
        CHECK(std::abs(h - testkit::ref_hamiltonian_s(s, c)) <= 1e-12 * std::abs(h));
        CHECK(std::abs(0.25 * (L * L).trace().real() - h) <= 1e-10 * std::max(1.0, std::abs(h)));
    }
}

TEST_CASE("property: isospectral flow, conserved energy, group law") {
    Gen gen(6);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = gen.pick(1, 4);
        const CouplingParams c = gen.couplings(0.3, 2.0);
        const SutherlandState s0 = gen.sutherland(n, c);
        const RealVector act0 = action_variables(s0, c);
        const double h0 = hamiltonian_s(s0, c);
        for (int k = 1; k <= 6; ++k) {
            const double t = 0.5 * k;
            const SutherlandState st = solve_flow_s(s0, c, t);
            CHECK(testkit::max_abs(action_variables(st, c) - act0) <= 1e-8 * std::max(1.0, testkit::max_abs(act0)));
            CHECK(std::abs(hamiltonian_s(st, c) - h0) <= 1e-8 * std::max(1.0, h0));
        }
        const double t1 = gen.uni(-1.0, 1.5), t2 = gen.uni(-1.0, 1.5);
        CHECK(state_distance(solve_flow_s(solve_flow_s(s0, c, t1), c, t2), solve_flow_s(s0, c, t1 + t2)) <= 1e-7);
    }
}

TEST_CASE("property: action variables Poisson-commute") {
    Gen gen(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = gen.pick(2, 3);
        const CouplingParams c = gen.couplings(0.3, 1.5);
        const SutherlandState s = gen.sutherland(n, c);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                const PhaseField fa = [&](const PhasePoint& pt) {
                    return action_variables(sutherland_from_phase_point(pt), c)(a);
                };
                const PhaseField fb = [&](const PhasePoint& pt) {
                    return action_variables(sutherland_from_phase_point(pt), c)(b);
                };
                CHECK(std::abs(fd_poisson(fa, fb, to_phase_point(s), 1e-5, in_sutherland_domain)) <= 1e-5);
            }
    }
}
