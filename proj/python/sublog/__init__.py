"""Numerical laboratory for log-damped critical bubbles on the unit ball."""

from ._core import (  # noqa: F401
    H_ball,
    NonlinearityParams,
    bubble_alpha,
    bubble_moment,
    continuation_sweep,
    delta_endpoint,
    delta_of_epsilon_exact,
    delta_of_epsilon_rate,
    epsilon_of_delta,
    eval_U,
    eval_U_scaled,
    eval_f,
    eval_fprime,
    eval_fsecond,
    eval_psi,
    eval_psi_scaled,
    harmonic_extension_ball,
    kappa_rate,
    loglog_decompose,
    orthogonality_defect,
    predicted_blowup,
    project_ball_centered_value,
    reduced_constants,
    robin_ball,
    robin_box,
    solve_reduced_ball,
    structural_constants,
    verify_bound_suite,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
