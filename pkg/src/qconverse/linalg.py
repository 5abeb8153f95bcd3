"""Dense Hermitian linear algebra on small quantum systems.

Operators are plain complex ``numpy`` arrays. Bipartite operators carry their
subsystem dimensions in :class:`BipartiteOperator`; subsystem ``A`` is always
the outer (slow) tensor factor and ``B`` the inner (fast) one, so
``np.kron(x_a, y_b)`` is the canonical product.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NonHermitian, NotPsd

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
# eigenvalues at or below this (relative to the largest) are the kernel when
# a non-positive power is taken
KERNEL_RTOL = 1e-12


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_hermitian(h):
    """Return ``h`` as a complex Hermitian array, raising if it is not one."""
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise DimensionMismatch(f"expected a nonempty square matrix, got shape {h.shape}")
    dev = np.max(np.abs(h - h.conj().T))
    if dev > HERMITIAN_TOL:
        raise NonHermitian(f"max |H - H^dag| = {dev:.3e} exceeds {HERMITIAN_TOL:g}")
    return 0.5 * (h + h.conj().T)


def eig_hermitian(h):
    """Eigendecomposition with eigenvalues sorted in descending order."""
    h = as_hermitian(h)
    w, v = np.linalg.eigh(h)
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def _clipped_spectrum(p):
    w, v = eig_hermitian(p)
    if w[-1] < -PSD_TOL:
        raise NotPsd(f"smallest eigenvalue {w[-1]:.3e} is below -{PSD_TOL:g}")
    return np.clip(w, 0.0, None), v


def kernel_cutoff(eigenvalues):
    return KERNEL_RTOL * max(1.0, float(np.max(eigenvalues)))


def spectral_apply(p, fn, t_nonpositive=False):
    """Apply ``fn`` eigenvalue-wise to PSD ``p``; kernel eigenvalues map to 0
    when ``t_nonpositive`` (inverse-type functions)."""
    w, v = _clipped_spectrum(p)
    out = np.zeros_like(w)
    keep = w > kernel_cutoff(w) if t_nonpositive else w > 0
    out[keep] = fn(w[keep])
    return (v * out) @ v.conj().T


def matrix_power(p, t):
    """Fractional power of a PSD operator, taken on its support.

    Zero eigenvalues stay zero for every ``t`` (pseudo-inverse convention for
    ``t < 0``, support projector for ``t == 0``).
    """
    return spectral_apply(p, lambda w: w**t, t_nonpositive=t <= 0)


def matrix_log(p):
    """Natural log of a PSD operator on its support (kernel maps to 0)."""
    return spectral_apply(p, np.log, t_nonpositive=True)


def support_projector(p):
    return matrix_power(p, 0.0)


def kernel_projector(p):
    return np.eye(p.shape[0]) - support_projector(p)


def positive_part(h):
    w, v = eig_hermitian(h)
    w = np.where(w > 0, w, 0.0)
    return (v * w) @ v.conj().T


def is_psd(p):
    return eig_hermitian(p).eigenvalues[-1] >= -PSD_TOL


def check_density(rho):
    """Validate a density operator (PSD, unit trace) and return it."""
    rho = as_hermitian(rho)
    if not is_psd(rho):
        raise NotPsd("operator has eigenvalues below -1e-10")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotPsd(f"trace {tr!r} differs from 1 by more than {TRACE_TOL:g}")
    return rho


@dataclass(frozen=True)
class BipartiteOperator:
    """An operator on ``A (x) B`` with ``A`` as the outer tensor factor."""

    op: np.ndarray
    dim_a: int
    dim_b: int

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise DimensionMismatch("subsystem dimensions must be positive")
        op = as_hermitian(self.op)
        if op.shape[0] != self.dim_a * self.dim_b:
            raise DimensionMismatch(
                f"operator dim {op.shape[0]} != dim_a*dim_b = {self.dim_a * self.dim_b}"
            )
        op.flags.writeable = False
        object.__setattr__(self, "op", op)

    @property
    def dim(self):
        return self.dim_a * self.dim_b

    def reshaped(self):
        """View as a rank-4 tensor indexed ``[a, b, a', b']``."""
        return self.op.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)


def partial_trace(x, which):
    """Trace out subsystem ``which`` (``"A"`` or ``"B"``) of a bipartite operator."""
    if x.op.shape[0] != x.dim_a * x.dim_b:
        raise DimensionMismatch("operator dimension does not match dim_a*dim_b")
    t = x.reshaped()
    if which == "A":
        return np.einsum("abac->bc", t)
    if which == "B":
        return np.einsum("abcb->ac", t)
    raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def tensor_product(x, y):
    return np.kron(np.asarray(x, dtype=np.complex128), np.asarray(y, dtype=np.complex128))


def bipartite_product(x_a, y_b):
    x_a = as_hermitian(x_a)
    y_b = as_hermitian(y_b)
    return BipartiteOperator(tensor_product(x_a, y_b), x_a.shape[0], y_b.shape[0])


def maximally_entangled(d):
    """Projector onto ``d**-1/2 sum_i |i>|i>``."""
    if d < 1:
        raise DimensionMismatch("d must be >= 1")
    psi = np.eye(d, dtype=np.complex128).reshape(d * d) / np.sqrt(d)
    return BipartiteOperator(np.outer(psi, psi.conj()), d, d)


def maximally_mixed(d):
    return np.eye(d, dtype=np.complex128) / d


def rng_for(seed):
    return np.random.default_rng(np.random.SeedSequence(seed))


def ginibre(d_rows, d_cols, rng):
    """Matrix of independent standard complex Gaussians."""
    return (rng.standard_normal((d_rows, d_cols)) + 1j * rng.standard_normal((d_rows, d_cols))) / np.sqrt(2)


def random_density(d, seed):
    """Full-rank random density operator ``G G^dag / Tr(G G^dag)``; deterministic in ``seed``."""
    if d < 1:
        raise DimensionMismatch("d must be >= 1")
    g = ginibre(d, d, rng_for(seed))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_bipartite_density(dim_a, dim_b, seed):
    return BipartiteOperator(random_density(dim_a * dim_b, seed), dim_a, dim_b)


def random_hermitian(d, seed):
    g = ginibre(d, d, rng_for(seed))
    return 0.5 * (g + g.conj().T)
