"""Kraus representations of CPTP maps and the quantum erasure channel."""
import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import BadDimensions, BadProbability, DimensionMismatch, NotTracePreserving, TooLarge
from .linalg import BipartiteOperator, ginibre, rng_for

CPTP_TOL = 1e-10
MAX_TOTAL_DIM = 4096


@dataclass(frozen=True)
class QuantumChannel:
    dim_in: int
    dim_out: int
    kraus: tuple

    def __call__(self, rho):
        """Apply the channel to an operator on the input space."""
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatch(f"expected {self.dim_in}x{self.dim_in} input, got {rho.shape}")
        out = sum(k @ rho @ k.conj().T for k in self.kraus)
        return 0.5 * (out + out.conj().T)


def make_channel(kraus):
    """Validated channel from a nonempty list of ``dim_out x dim_in`` Kraus matrices."""
    mats = [np.array(k, dtype=np.complex128) for k in kraus]
    if not mats:
        raise BadDimensions("need at least one Kraus operator")
    shape = mats[0].shape
    if len(shape) != 2 or any(m.shape != shape for m in mats):
        raise BadDimensions("Kraus operators must be matrices of a common shape")
    dim_out, dim_in = shape
    gram = sum(m.conj().T @ m for m in mats)
    dev = np.linalg.norm(gram - np.eye(dim_in))
    if dev > CPTP_TOL:
        raise NotTracePreserving(dev)
    for m in mats:
        m.flags.writeable = False
    return QuantumChannel(dim_in, dim_out, tuple(mats))


def identity_channel(d):
    return make_channel([np.eye(d)])


def apply_to_B(ch, rho_ab):
    """Apply ``ch`` to the B factor, identity on A."""
    if ch.dim_in != rho_ab.dim_b:
        raise DimensionMismatch(f"channel input dim {ch.dim_in} != dim_b {rho_ab.dim_b}")
    if rho_ab.dim_a * ch.dim_out > MAX_TOTAL_DIM:
        raise TooLarge(f"output dimension {rho_ab.dim_a * ch.dim_out} exceeds {MAX_TOTAL_DIM}")
    t = rho_ab.reshaped()
    out = np.zeros((rho_ab.dim_a, ch.dim_out, rho_ab.dim_a, ch.dim_out), dtype=np.complex128)
    for k in ch.kraus:
        # (I (x) K) rho (I (x) K)^dag without forming I (x) K
        out += np.einsum("ij,ajbk,lk->aibl", k, t, k.conj(), optimize=True)
    d = rho_ab.dim_a * ch.dim_out
    out = out.reshape(d, d)
    return BipartiteOperator(0.5 * (out + out.conj().T), rho_ab.dim_a, ch.dim_out)


def check_probability(p):
    if not 0.0 <= p <= 1.0:
        raise BadProbability(f"erasure probability must lie in [0, 1], got {p}")


def _embed(d):
    """``d -> d+1`` isometry leaving the state intact."""
    g = np.zeros((d + 1, d), dtype=np.complex128)
    g[:d, :d] = np.eye(d)
    return g


def _erase_kraus(d):
    """Kraus set ``|e><i|`` replacing any input by the flag ``|e> = |d>``."""
    out = []
    for i in range(d):
        k = np.zeros((d + 1, d), dtype=np.complex128)
        k[d, i] = 1.0
        out.append(k)
    return out


def erasure_channel(d, p):
    """Erasure channel ``d -> d+1``; the flag is the last output basis vector."""
    if d < 1:
        raise BadDimensions("d must be >= 1")
    check_probability(p)
    kraus = [np.sqrt(1.0 - p) * _embed(d)] + [np.sqrt(p) * k for k in _erase_kraus(d)]
    return make_channel(kraus)


def _kron_kraus(kraus_sets):
    return [reduce(np.kron, combo) for combo in itertools.product(*kraus_sets)]


def tensor_power(ch, n, dim_a=1):
    """``ch`` tensored with itself ``n`` times.

    ``dim_a`` is the dimension of the reference system the power will act
    alongside; it only enters the size guard.
    """
    if n < 1:
        raise BadDimensions("n must be >= 1")
    if ch.dim_out**n * dim_a > MAX_TOTAL_DIM or ch.dim_in**n * dim_a > MAX_TOTAL_DIM:
        raise TooLarge(f"{n} copies of a {ch.dim_in}->{ch.dim_out} channel exceed {MAX_TOTAL_DIM}")
    if n == 1:
        return ch
    return make_channel(_kron_kraus([ch.kraus] * n))


@dataclass(frozen=True)
class ErasureBlock:
    erased: tuple
    weight: float
    state: BipartiteOperator

    @property
    def n_erased(self):
        return sum(self.erased)


def erasure_block_decomposition(d, p, n, rho_aan):
    """Split the output of ``n`` erasure channels into its ``2**n`` orthogonal blocks.

    Each block fixes which of the ``n`` uses were erased; ``weight`` is
    ``(1-p)**(n-k) p**k`` for ``k`` erasures and ``state`` is the normalized
    output conditioned on that pattern (intact systems embedded, erased
    systems replaced by ``|e><e|``).
    """
    check_probability(p)
    if n > 8:
        raise TooLarge("block decomposition is limited to n <= 8")
    if rho_aan.dim_b != d**n:
        raise DimensionMismatch(f"dim_b {rho_aan.dim_b} != d**n = {d**n}")
    if rho_aan.dim_a * (d + 1) ** n > MAX_TOTAL_DIM:
        raise TooLarge("output exceeds the total dimension cap")
    keep = [_embed(d)]
    erase = _erase_kraus(d)
    blocks = []
    for erased in itertools.product((False, True), repeat=n):
        k = sum(erased)
        weight = (1.0 - p) ** (n - k) * p**k
        kraus = _kron_kraus([erase if e else keep for e in erased])
        local = QuantumChannel(d**n, (d + 1) ** n, tuple(kraus))
        blocks.append(ErasureBlock(erased, weight, apply_to_B(local, rho_aan)))
    return blocks


def recombine(blocks):
    first = blocks[0].state
    op = sum(b.weight * b.state.op for b in blocks)
    return BipartiteOperator(op, first.dim_a, first.dim_b)


def random_channel(dim_in, dim_out, dim_env, seed):
    """Random channel from a Haar-like Stinespring isometry ``V: in -> out (x) env``."""
    if min(dim_in, dim_out, dim_env) < 1 or dim_out * dim_env < dim_in:
        raise BadDimensions("need dim_out * dim_env >= dim_in >= 1")
    g = ginibre(dim_out * dim_env, dim_in, rng_for(seed))
    q, r = np.linalg.qr(g)
    # fix column phases so the isometry is a deterministic function of g
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    v = q.reshape(dim_out, dim_env, dim_in)
    return make_channel([v[:, e, :] for e in range(dim_env)])


def erasure_decoder(d):
    """``d+1 -> d`` map that keeps intact inputs and replaces the flag by ``1/d``."""
    keep = _embed(d).conj().T
    flag = []
    for j in range(d):
        k = np.zeros((d, d + 1), dtype=np.complex128)
        k[j, d] = 1.0 / np.sqrt(d)
        flag.append(k)
    return make_channel([keep] + flag)
