"""Conditional Renyi quantities and the Gallager-type function of a bipartite state.

``k_lambda`` is the infimum over states ``sigma_B`` of
``D_lam(rho_AB || 1 (x) sigma_B)``, computed in closed form from the
minimizer ``[Tr_A rho^lam]^(1/lam)``. ``k_lambda_numeric`` reaches the same
infimum by direct search and exists to check the closed form.

The Gallager parameter ``s`` and the Renyi order are tied by
``lam = 1/(s+1)``; ``s`` in ``[-1/2, 0)`` corresponds to ``lam`` in ``(1, 2]``.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .channel import apply_to_B
from .divergence import check_order, hockey_stick, renyi_divergence
from .errors import BadDimensions, NotConverged
from .linalg import (
    BipartiteOperator,
    _clipped_spectrum,
    kernel_cutoff,
    matrix_log,
    matrix_power,
    partial_trace,
    tensor_product,
)

S_MIN = -0.5
FD_STEP = 1e-5
MAX_ORACLE_DIM_B = 4


def order_from_s(s):
    return 1.0 / (s + 1.0)


def s_from_order(lam):
    return 1.0 / lam - 1.0


def check_s(s):
    s = float(s)
    if not S_MIN <= s <= 0.0:
        raise ValueError(f"s must lie in [-1/2, 0], got {s}")
    return s


def _sibson_unnormalized(rho_ab, lam):
    powered = BipartiteOperator(matrix_power(rho_ab.op, lam), rho_ab.dim_a, rho_ab.dim_b)
    return matrix_power(partial_trace(powered, "A"), 1.0 / lam)


def k_lambda(rho_ab, lam):
    """Closed form ``lam/(lam-1) ln Tr [Tr_A rho^lam]^(1/lam)``."""
    lam = check_order(lam)
    t = np.trace(_sibson_unnormalized(rho_ab, lam)).real
    return float(lam / (lam - 1.0) * np.log(t))


def sibson_state(rho_ab, lam):
    """The state ``sigma_B`` attaining the infimum in ``k_lambda``."""
    lam = check_order(lam)
    m = _sibson_unnormalized(rho_ab, lam)
    return m / np.trace(m).real


@dataclass(frozen=True)
class OptimizerOptions:
    starts: int = 8
    max_iters: int = 5000
    value_tol: float = 1e-9
    seed: int = 0
    stall_iters: int = 50

    def __post_init__(self):
        if self.starts < 1 or self.max_iters < 1 or self.value_tol <= 0 or self.stall_iters < 1:
            raise ValueError("optimizer options must be positive")


def state_from_params(x, d):
    """Map ``2 d**2`` reals to the density operator ``G^dag G / Tr(G^dag G)``."""
    g = (x[: d * d] + 1j * x[d * d :]).reshape(d, d)
    m = g.conj().T @ g
    return m / np.trace(m).real


def _nelder_mead_run(fun, x0, max_iters, opts):
    """One simplex search stopped by the stall rule.

    Returns ``(x, f, iterations, stalled)``; ``stalled`` is True when the best
    value improved by less than ``value_tol`` over ``stall_iters``
    consecutive iterations.
    """
    history = []

    def callback(intermediate_result):
        history.append(intermediate_result.fun)
        if len(history) > opts.stall_iters and history[-opts.stall_iters - 1] - history[-1] < opts.value_tol:
            raise StopIteration

    res = minimize(
        fun,
        x0,
        method="Nelder-Mead",
        callback=callback,
        options={"maxiter": max_iters, "xatol": 1e-14, "fatol": 1e-14, "adaptive": True},
    )
    stalled = len(history) > opts.stall_iters and history[-opts.stall_iters - 1] - history[-1] < opts.value_tol
    # simplex collapse before the stall window is also a converged stop
    stalled = stalled or (res.status == 0 and len(history) < max_iters)
    return res.x, float(res.fun), len(history), stalled


def _search_one_start(fun, x0, opts):
    """Simplex search restarted from its own best point until restarts stop helping."""
    budget = opts.max_iters
    x, f, used, stalled = _nelder_mead_run(fun, x0, budget, opts)
    budget -= used
    while stalled and budget > opts.stall_iters:
        x_new, f_new, used, stalled = _nelder_mead_run(fun, x, budget, opts)
        budget -= used
        improved = f - f_new
        if f_new < f:
            x, f = x_new, f_new
        if improved < opts.value_tol:
            return x, f, True
    return x, f, stalled and budget > 0


def minimize_over_states(objective, d, opts):
    """Multi-start minimization of ``objective(sigma)`` over ``d``-dimensional states.

    Each start's trajectory depends only on its own child seed, so the result
    does not depend on evaluation order. Raises :class:`NotConverged` if no
    start satisfies the stall criterion within ``max_iters``.
    """
    children = np.random.SeedSequence(opts.seed).spawn(opts.starts)
    best = np.inf
    any_converged = False
    for child in children:
        rng = np.random.default_rng(child)
        x0 = rng.standard_normal(2 * d * d)
        _, f, converged = _search_one_start(lambda x: objective(state_from_params(x, d)), x0, opts)
        any_converged = any_converged or converged
        best = min(best, f)
    if not any_converged:
        raise NotConverged(f"no start stalled within {opts.max_iters} iterations")
    return float(best)


def _check_oracle_size(rho_ab):
    if rho_ab.dim_b > MAX_ORACLE_DIM_B:
        raise BadDimensions(f"numeric oracle supports dim_b <= {MAX_ORACLE_DIM_B}, got {rho_ab.dim_b}")


def k_lambda_numeric(rho_ab, lam, opts=None):
    """Direct search for ``inf_sigma D_lam(rho_AB || 1 (x) sigma)``."""
    lam = check_order(lam)
    opts = opts or OptimizerOptions()
    _check_oracle_size(rho_ab)
    eye_a = np.eye(rho_ab.dim_a)
    return minimize_over_states(
        lambda sigma: renyi_divergence(rho_ab.op, tensor_product(eye_a, sigma), lam),
        rho_ab.dim_b,
        opts,
    )


def k_hockey_numeric(rho_ab, gamma, opts=None):
    """Direct search for ``inf_sigma Tr(rho_AB - gamma 1 (x) sigma)^+``."""
    if gamma < 1:
        raise ValueError(f"gamma must be >= 1, got {gamma}")
    opts = opts or OptimizerOptions()
    _check_oracle_size(rho_ab)
    eye_a = np.eye(rho_ab.dim_a)
    return minimize_over_states(
        lambda sigma: hockey_stick(rho_ab.op, tensor_product(eye_a, sigma), gamma),
        rho_ab.dim_b,
        opts,
    )


def _g_value(sigma_ab, s):
    # no range check: finite differences step slightly outside [-1/2, 0]
    powered = BipartiteOperator(matrix_power(sigma_ab.op, 1.0 / (s + 1.0)), sigma_ab.dim_a, sigma_ab.dim_b)
    kappa1 = partial_trace(powered, "A")
    return float(-np.log(np.trace(matrix_power(kappa1, s + 1.0)).real))


def g_function(sigma_ab, s):
    """``g(s) = -ln Tr [Tr_A sigma^(1/(s+1))]^(s+1)`` on ``s`` in ``[-1/2, 0]``."""
    return _g_value(sigma_ab, check_s(s))


def _g_derivative_analytic(sigma_ab, s):
    w, v = _clipped_spectrum(sigma_ab.op)
    keep = w > kernel_cutoff(w)
    w, v = w[keep], v[:, keep]
    da, db = sigma_ab.dim_a, sigma_ab.dim_b
    # sigma_i = Tr_A |i><i|, stacked along the first axis
    vecs = v.T.reshape(-1, da, db)
    sigma_i = np.einsum("kab,kac->kbc", vecs, vecs.conj())
    wp = w ** (1.0 / (s + 1.0))
    kappa1 = np.einsum("k,kbc->bc", wp, sigma_i)
    kappa2 = np.einsum("k,kbc->bc", wp * np.log(wp), sigma_i)
    num = np.trace(matrix_power(kappa1, s) @ (kappa2 - kappa1 @ matrix_log(kappa1))).real
    den = np.trace(matrix_power(kappa1, s + 1.0)).real
    return float(num / den)


def _g_derivative_fd(sigma_ab, s):
    if s - FD_STEP < S_MIN:
        # second-order one-sided stencil
        f0, f1, f2 = (_g_value(sigma_ab, s + k * FD_STEP) for k in (0, 1, 2))
        return (-3 * f0 + 4 * f1 - f2) / (2 * FD_STEP)
    return (_g_value(sigma_ab, s + FD_STEP) - _g_value(sigma_ab, s - FD_STEP)) / (2 * FD_STEP)


def g_derivative(sigma_ab, s, method="analytic"):
    """Derivative of :func:`g_function` in ``s``.

    ``"analytic"`` uses ``Tr k1^s (k2 - k1 ln k1) / Tr k1^(s+1)`` with
    ``k1 = sum_i l_i^(1/(s+1)) sigma_i`` and
    ``k2 = sum_i l_i^(1/(s+1)) ln l_i^(1/(s+1)) sigma_i``, where
    ``sigma_AB = sum_i l_i |i><i|`` and ``sigma_i = Tr_A |i><i|``.
    ``"finite_difference"`` uses a central step of ``1e-5`` (a second-order
    forward stencil at ``s = -1/2``). At ``s = 0`` both equal the coherent
    information.
    """
    s = check_s(s)
    if method == "analytic":
        return _g_derivative_analytic(sigma_ab, s)
    if method == "finite_difference":
        return _g_derivative_fd(sigma_ab, s)
    raise ValueError(f"unknown method {method!r}")


class DerivativeComparison(NamedTuple):
    analytic: float
    finite_difference: float
    agree: bool


def compare_g_derivatives(sigma_ab, s, rtol=1e-4):
    """Evaluate both derivative methods and flag whether they agree to ``rtol``."""
    a = g_derivative(sigma_ab, s, "analytic")
    f = g_derivative(sigma_ab, s, "finite_difference")
    return DerivativeComparison(a, f, bool(abs(a - f) <= rtol * max(abs(a), abs(f), 1e-12)))


def e0_channel(ch, rho_aa, s):
    """``E0(s)`` of a channel for the input ``rho_AA'``: ``g`` of the channel output."""
    return g_function(apply_to_B(ch, rho_aa), s)
