#include "cnduality/cauchy.hpp"
#include "cnduality/duality.hpp"
#include "cnduality/errors.hpp"
#include "cnduality/oracle.hpp"
#include "cnduality/rsvd.hpp"
#include "cnduality/sutherland.hpp"
#include "cnduality/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cnduality;

namespace {

using Pair = std::pair<RealVector, RealVector>;

SutherlandState s_state(const RealVector& q, const RealVector& p) { return {q, p}; }
RsvdState r_state(const RealVector& lam, const RealVector& theta) { return {lam, theta}; }

// Trajectory as (times, positions[k, n], momenta[k, n]).
template <class State, class Pos, class Mom>
py::tuple trajectory_tuple(const Trajectory<State>& tr, Pos pos, Mom mom) {
    const auto k = static_cast<Eigen::Index>(tr.states.size());
    const Eigen::Index n = k ? pos(tr.states.front()).size() : 0;
    Eigen::MatrixXd a(k, n), b(k, n);
    for (Eigen::Index i = 0; i < k; ++i) {
        a.row(i) = pos(tr.states[i]).transpose();
        b.row(i) = mom(tr.states[i]).transpose();
    }
    return py::make_tuple(tr.t, a, b);
}

Rk4Options rk4_options(double dt, double richardson_target) {
    Rk4Options opt;
    opt.dt = dt;
    opt.richardson_target = richardson_target;
    return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sutherland and RSvD models, their duality map and the numerical oracle";

    // Leaked on purpose: a static py::object would be destroyed after the interpreter.
    static py::handle error_type = py::exception<Error>(m, "Error").release();
    py::register_exception_translator([](std::exception_ptr ptr) {
        try {
            if (ptr) std::rethrow_exception(ptr);
        } catch (const Error& e) {
            py::object exc = error_type(py::str(e.what()));
            exc.attr("kind") = std::string(to_string(e.kind()));
            exc.attr("last_safe_t") = e.last_safe_t() ? py::cast(*e.last_safe_t()) : py::none();
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("hamiltonian_s", [](const RealVector& q, const RealVector& p, double g, double g2) {
        return hamiltonian_s(s_state(q, p), {g, g2});
    }, py::arg("q"), py::arg("p"), py::arg("g"), py::arg("g2"));
    m.def("hamiltonian_r", [](const RealVector& lam, const RealVector& theta, double g, double g2) {
        return hamiltonian_r(r_state(lam, theta), {g, g2});
    }, py::arg("lam"), py::arg("theta"), py::arg("g"), py::arg("g2"));

    m.def("lax_l", [](const RealVector& q, const RealVector& p, double g, double g2) {
        return lax_l(s_state(q, p), {g, g2});
    }, py::arg("q"), py::arg("p"), py::arg("g"), py::arg("g2"));
    m.def("lax_a", [](const RealVector& lam, const RealVector& theta, double g, double g2) {
        return lax_a(r_state(lam, theta), {g, g2}).A;
    }, py::arg("lam"), py::arg("theta"), py::arg("g"), py::arg("g2"));

    m.def("action_variables", [](const RealVector& q, const RealVector& p, double g, double g2) {
        return action_variables(s_state(q, p), {g, g2});
    }, py::arg("q"), py::arg("p"), py::arg("g"), py::arg("g2"));
    m.def("dual_actions", [](const RealVector& lam, const RealVector& theta, double g, double g2) {
        return dual_actions(r_state(lam, theta), {g, g2});
    }, py::arg("lam"), py::arg("theta"), py::arg("g"), py::arg("g2"));

    m.def("solve_flow_s", [](const RealVector& q, const RealVector& p, double g, double g2, double t) {
        const auto s = solve_flow_s(s_state(q, p), {g, g2}, t);
        return Pair{s.q, s.p};
    }, py::arg("q"), py::arg("p"), py::arg("g"), py::arg("g2"), py::arg("t"));
    m.def("solve_flow_r", [](const RealVector& lam, const RealVector& theta, double g, double g2, double t) {
        const auto s = solve_flow_r(r_state(lam, theta), {g, g2}, t);
        return Pair{s.lambda, s.theta};
    }, py::arg("lam"), py::arg("theta"), py::arg("g"), py::arg("g2"), py::arg("t"));

    m.def("dualize_s_to_r", [](const RealVector& q, const RealVector& p, double g, double g2) {
        const auto s = dualize_s_to_r(s_state(q, p), {g, g2});
        return Pair{s.lambda, s.theta};
    }, py::arg("q"), py::arg("p"), py::arg("g"), py::arg("g2"));
    m.def("dualize_r_to_s", [](const RealVector& lam, const RealVector& theta, double g, double g2) {
        const auto s = dualize_r_to_s(r_state(lam, theta), {g, g2});
        return Pair{s.q, s.p};
    }, py::arg("lam"), py::arg("theta"), py::arg("g"), py::arg("g2"));

    m.def("rk4_sutherland", [](const RealVector& q, const RealVector& p, double g, double g2,
                               const std::vector<double>& times, double dt, double richardson_target) {
        const auto tr = rk4_sutherland_at(s_state(q, p), {g, g2}, times, rk4_options(dt, richardson_target));
        return trajectory_tuple(tr, [](const SutherlandState& s) { return s.q; },
                                [](const SutherlandState& s) { return s.p; });
    }, py::arg("q"), py::arg("p"), py::arg("g"), py::arg("g2"), py::arg("times"), py::arg("dt") = 1e-3,
       py::arg("richardson_target") = 0.0);
    m.def("rk4_rsvd", [](const RealVector& lam, const RealVector& theta, double g, double g2,
                         const std::vector<double>& times, double dt, double richardson_target) {
        const auto tr = rk4_rsvd_at(r_state(lam, theta), {g, g2}, times, rk4_options(dt, richardson_target));
        return trajectory_tuple(tr, [](const RsvdState& s) { return s.lambda; },
                                [](const RsvdState& s) { return s.theta; });
    }, py::arg("lam"), py::arg("theta"), py::arg("g"), py::arg("g2"), py::arg("times"), py::arg("dt") = 1e-3,
       py::arg("richardson_target") = 0.0);

    m.def("cauchy_det", [](const CxVector& x, bool c_symmetric) { return cauchy_det(CauchyContext(x, c_symmetric)); },
          py::arg("x"), py::arg("c_symmetric") = false);
    m.def("w_values", [](const CxVector& x, bool c_symmetric) { return w_values(CauchyContext(x, c_symmetric)); },
          py::arg("x"), py::arg("c_symmetric") = false);

    m.def("verify", [](std::uint64_t seed, int n_max, int draws) {
        VerifyOptions opt;
        opt.seed = seed;
        opt.n_max = n_max;
        opt.draws = draws;
        VerifyReport rep;
        {
            py::gil_scoped_release release;
            rep = run_verify(opt);
        }
        py::list out;
        for (const auto& r : rep.checks) {
            py::dict d;
            d["name"] = r.name;
            d["anchor"] = r.anchor;
            d["max_residual"] = r.max_residual;
            d["tolerance"] = r.tolerance;
            d["pass"] = r.pass;
            d["error"] = r.error;
            out.append(d);
        }
        return out;
    }, py::arg("seed") = 1, py::arg("n_max") = 4, py::arg("draws") = 200);
}
