"""Sutherland and RSvD particle models, the duality map between them, and a
numerical oracle for cross-checking the spectral solvers."""

from ._core import (
    Error,
    action_variables,
    cauchy_det,
    dual_actions,
    dualize_r_to_s,
    dualize_s_to_r,
    hamiltonian_r,
    hamiltonian_s,
    lax_a,
    lax_l,
    rk4_rsvd,
    rk4_sutherland,
    solve_flow_r,
    solve_flow_s,
    verify,
    w_values,
)

__all__ = [
    "Error",
    "action_variables",
    "cauchy_det",
    "dual_actions",
    "dualize_r_to_s",
    "dualize_s_to_r",
    "hamiltonian_r",
    "hamiltonian_s",
    "lax_a",
    "lax_l",
    "rk4_rsvd",
    "rk4_sutherland",
    "solve_flow_r",
    "solve_flow_s",
    "verify",
    "w_values",
]
