"""Renyi and hockey-stick divergences, entropies and coherent information.

All logarithms are natural. Renyi orders are restricted to ``1 < lam <= 2``.
"""
import numpy as np

from .errors import SupportViolation, ZeroOperator
from .linalg import (
    as_hermitian,
    eig_hermitian,
    kernel_cutoff,
    partial_trace,
    positive_part,
    _clipped_spectrum,
)

SUPPORT_TOL = 1e-9


def check_order(lam):
    lam = float(lam)
    if not 1.0 < lam <= 2.0:
        raise ValueError(f"Renyi order must lie in (1, 2], got {lam}")
    return lam


def renyi_trace(rho, sigma, lam):
    """``Tr rho^lam sigma^(1-lam)`` with ``sigma``'s power taken on its support.

    Returns ``inf`` when ``rho`` has weight above ``SUPPORT_TOL`` on the kernel
    of ``sigma``.
    """
    wr, vr = _clipped_spectrum(rho)
    ws, vs = _clipped_spectrum(sigma)
    on_support = ws > kernel_cutoff(ws)
    # weight of rho on ker(sigma)
    ker = vs[:, ~on_support]
    if ker.shape[1]:
        leak = np.einsum("ik,ij,jk->", ker.conj(), (vr * wr) @ vr.conj().T, ker).real
        if leak > SUPPORT_TOL:
            return np.inf
    # Tr rho^lam sigma^(1-lam) = sum_ij wr_i^lam ws_j^(1-lam) |<r_i|s_j>|^2
    overlap = np.abs(vr.conj().T @ vs[:, on_support]) ** 2
    return float(wr**lam @ overlap @ ws[on_support] ** (1.0 - lam))


def renyi_divergence(rho, sigma, lam):
    """Petz-Renyi divergence ``(lam-1)^-1 ln Tr rho^lam sigma^(1-lam)``.

    ``rho`` and ``sigma`` need only be positive semidefinite. Returns
    ``inf`` if ``supp(rho)`` is not contained in ``supp(sigma)``.
    """
    lam = check_order(lam)
    rho = as_hermitian(rho)
    if np.trace(rho).real <= 1e-12:
        raise ZeroOperator("rho has (numerically) zero trace")
    q = renyi_trace(rho, sigma, lam)
    if np.isinf(q):
        return np.inf
    return float(np.log(q) / (lam - 1.0))


def binary_renyi(alpha, beta, lam):
    """Renyi divergence between ``diag(alpha, 1-alpha)`` and ``diag(beta, 1/beta - beta)``.

    Evaluated in log space so it stays finite for ``beta`` as small as
    ``exp(-700)``.
    """
    lam = check_order(lam)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    terms = []
    if alpha > 0:
        terms.append(lam * np.log(alpha) + (1.0 - lam) * np.log(beta))
    if alpha < 1:
        if beta == 1.0:
            raise SupportViolation("alpha < 1 puts weight on Pi_1, which beta = 1 does not support")
        # ln(1/beta - beta) = -ln(beta) + log1p(-beta^2)
        log_tail = -np.log(beta) + np.log1p(-beta * beta)
        terms.append(lam * np.log1p(-alpha) + (1.0 - lam) * log_tail)
    return float(np.logaddexp.reduce(terms) / (lam - 1.0))


def hockey_stick(rho, sigma, gamma):
    """``Tr (rho - gamma sigma)^+`` for ``gamma >= 1``."""
    if gamma < 1:
        raise ValueError(f"gamma must be >= 1, got {gamma}")
    diff = as_hermitian(rho) - gamma * as_hermitian(sigma)
    return float(np.trace(positive_part(diff)).real)


def binary_hockey_stick(alpha, beta, gamma):
    if gamma < 1:
        raise ValueError(f"gamma must be >= 1, got {gamma}")
    if not 0.0 <= alpha <= 1.0 or not 0.0 < beta <= 1.0:
        raise ValueError("need 0 <= alpha <= 1 and 0 < beta <= 1")
    return max(alpha - gamma * beta, 0.0) + max((1.0 - alpha) - gamma * (1.0 / beta - beta), 0.0)


def von_neumann_entropy(rho):
    w = eig_hermitian(rho).eigenvalues
    w = w[w > 0]
    return float(-np.sum(w * np.log(w)))


def coherent_information(rho_ab):
    """``H(B) - H(AB)`` of a bipartite state."""
    return von_neumann_entropy(partial_trace(rho_ab, "A")) - von_neumann_entropy(rho_ab.op)
