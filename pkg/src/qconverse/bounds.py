"""Fidelity upper bounds for codes sent above capacity.

Rates are in nats per channel use. The erasure-channel functions take the
erasure probability ``p`` and input dimension ``d_a`` directly; generic
channels go through :func:`theorem1_slack` with an explicit output state.
"""
import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from .channel import apply_to_B, check_probability, erasure_channel, erasure_decoder, tensor_power
from .divergence import binary_renyi, check_order
from .errors import ConstraintViolated, QConverseError, RateBelowCapacity
from .exponent import check_s, k_lambda
from .linalg import maximally_entangled

GRID_POINTS = 1024
S_TOL = 1e-8
CSV_HEADER = ("sweep_var", "s_star", "exponent", "fidelity_bound", "method")


@dataclass(frozen=True)
class BoundQuery:
    n: int
    rate: float
    p: float
    d_a: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.rate < 0:
            raise ValueError("rate must be >= 0")
        check_probability(self.p)
        if self.d_a < 2:
            raise ValueError("d_a must be >= 2")


def erasure_e0(p, d_a, s):
    """``-ln[(1-p) d_a^-s + p d_a^s]`` for ``s`` in ``[-1/2, 0]``."""
    check_probability(p)
    s = check_s(s)
    ln_d = math.log(d_a)
    return -math.log((1.0 - p) * math.exp(-s * ln_d) + p * math.exp(s * ln_d))


def erasure_capacity(p, d_a):
    check_probability(p)
    return max(1.0 - 2.0 * p, 0.0) * math.log(d_a)


def renyi_exponent(q, s):
    """``E0(s) - s R``; the fidelity bound is ``exp(-n * renyi_exponent)``."""
    return erasure_e0(q.p, q.d_a, s) - check_s(s) * q.rate


def fidelity_bound_renyi(q, s):
    return min(1.0, math.exp(-q.n * renyi_exponent(q, s)))


def _golden_max(f, a, b, tol):
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def strong_converse_exponent(rate, p, d_a):
    """Maximize ``E0(s) - s*rate`` over ``s`` in ``[-1/2, 0]``.

    Dense grid followed by golden-section refinement around the best grid
    point. ``s = 0`` is included as the limit point, so the exponent is never
    negative; it is zero exactly when no ``s < 0`` gives decay.

    Returns ``(s_star, exponent)``.
    """
    if rate < 0:
        raise ValueError("rate must be >= 0")

    def obj(s):
        return erasure_e0(p, d_a, s) - s * rate

    grid = np.linspace(-0.5, 0.0, GRID_POINTS + 1)
    vals = np.array([obj(s) for s in grid])
    i = int(np.argmax(vals))
    best_s, best_v = float(grid[i]), float(vals[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, GRID_POINTS)]
    s_ref, v_ref = _golden_max(obj, lo, hi, S_TOL)
    if v_ref > best_v:
        best_s, best_v = s_ref, v_ref
    # report the s -> 0 limit as +0.0 rather than -0.0
    return float(best_s) + 0.0, float(best_v) + 0.0


def hockey_terms(q):
    """The two exponential terms of the hockey-stick fidelity bound.

    ``exp(-(n/2)(R - Q))`` and ``exp(-(n/2p)[(2p-1)^+/2 + R/(4 ln d)]^2)``.
    """
    if q.p <= 0:
        raise ValueError("the hockey-stick bound needs p > 0")
    cap = erasure_capacity(q.p, q.d_a)
    if q.rate <= cap:
        raise RateBelowCapacity(f"rate {q.rate} does not exceed capacity {cap}")
    ln_d = math.log(q.d_a)
    t1 = math.exp(-0.5 * q.n * (q.rate - cap))
    x = max(2.0 * q.p - 1.0, 0.0) / 2.0 + q.rate / (4.0 * ln_d)
    t2 = math.exp(-q.n / (2.0 * q.p) * x * x)
    return t1, t2


def fidelity_bound_hockey(q):
    return min(1.0, sum(hockey_terms(q)))


def hockey_exponent(q):
    """Decay rate of the slower of the two hockey-stick terms."""
    t1, t2 = hockey_terms(BoundQuery(1, q.rate, q.p, q.d_a))
    return min(-math.log(t1), -math.log(t2))


def hockey_log_gamma(q):
    """``ln gamma = n (R + Q) / 2``, the threshold used by the hockey-stick bound."""
    return q.n * (q.rate + erasure_capacity(q.p, q.d_a)) / 2.0


def hockey_cutoff(q):
    """Largest erasure count ``k`` with ``k <= n/2 - floor(ln gamma / (2 ln d))``."""
    m = q.n / 2.0 - math.floor(hockey_log_gamma(q) / (2.0 * math.log(q.d_a)))
    return int(math.floor(m))


def binomial_tail(n, m, p):
    """``sum_{k=0}^{m} C(n,k) (1-p)^(n-k) p^k`` accumulated in log space."""
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    check_probability(p)
    if m == n:
        return 1.0
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 0.0
    k = np.arange(m + 1)
    logs = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) + (n - k) * math.log1p(-p) + k * math.log(p)
    return float(min(1.0, math.exp(logsumexp(logs))))


def chernoff_lower_tail(n, m, p):
    """Chernoff bound ``exp(-n KL(m/n || p))`` on ``P[Bin(n,p) <= m]`` (1 when ``m >= np``)."""
    check_probability(p)
    if m < 0:
        return 0.0
    a = m / n
    if a >= p:
        return 1.0
    kl = (a * math.log(a / p) if a > 0 else 0.0) + (1 - a) * math.log((1 - a) / (1 - p))
    return math.exp(-n * kl)


def hockey_divergence_erasure(q, log_gamma=None):
    """Exact ``Tr(rho_ABn - gamma 1 (x) rho_Bn)^+`` for erasure outputs of a
    maximally entangled input, summed block by block.

    A block with ``k`` erasures contributes ``(1 - gamma d^(2k-n))^+``.
    """
    lg = hockey_log_gamma(q) if log_gamma is None else log_gamma
    ln_d = math.log(q.d_a)
    total = 0.0
    for k in range(q.n + 1):
        w = math.exp(gammaln(q.n + 1) - gammaln(k + 1) - gammaln(q.n - k + 1))
        w *= (1.0 - q.p) ** (q.n - k) * q.p**k
        total += w * max(0.0, 1.0 - math.exp(lg + (2 * k - q.n) * ln_d))
    return total


def check_fidelity_constraint(fidelity, n, rate):
    beta = math.exp(-n * rate)
    if fidelity < beta:
        raise ConstraintViolated(
            f"F = {fidelity} < exp(-nR) = {beta}; F already decays exponentially"
        )
    return beta


def theorem1_slack(fidelity, n, rate, lam, rho_out=None, channel=None, rho_in=None):
    """``K_lam(A>B^n) - D_lam(F || e^{-nR})`` for a code of fidelity ``F``.

    Pass either the output state ``rho_out`` on ``A B^n`` or a single-use
    ``channel`` with an input ``rho_in`` on ``A A'^n``; the channel is then
    applied ``n`` times. A valid code always has nonnegative slack.
    """
    lam = check_order(lam)
    beta = check_fidelity_constraint(fidelity, n, rate)
    if rho_out is None:
        if channel is None or rho_in is None:
            raise ValueError("provide rho_out, or channel together with rho_in")
        rho_out = apply_to_B(tensor_power(channel, n, rho_in.dim_a), rho_in)
    return k_lambda(rho_out, lam) - binary_renyi(min(fidelity, 1.0), beta, lam)


def renyi_lower_bound_check(fidelity, n, rate, lam):
    """``D_lam(F || e^{-nR}) - [lam/(lam-1) ln F + nR]``; never negative."""
    lam = check_order(lam)
    if not 0.0 < fidelity <= 1.0:
        raise ValueError("F must lie in (0, 1]")
    beta = check_fidelity_constraint(fidelity, n, rate)
    return binary_renyi(fidelity, beta, lam) - (lam / (lam - 1.0) * math.log(fidelity) + n * rate)


@dataclass(frozen=True)
class BoundRow:
    sweep_var: float
    s_star: float
    exponent: float
    fidelity_bound: float
    method: str
    error: str = ""


@dataclass(frozen=True)
class BoundCurve:
    query: BoundQuery
    sweep: str
    rows: list = field(default_factory=list)

    def column(self, name, method=None):
        return np.array([getattr(r, name) for r in self.rows if method is None or r.method == method])

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow(
                [
                    _fmt(r.sweep_var),
                    _fmt(r.s_star),
                    _fmt(r.exponent),
                    _fmt(r.fidelity_bound),
                    r.method,
                ]
            )
        return buf.getvalue()


def _fmt(x):
    return format(float(x), ".17g")


def _renyi_row(q, var):
    s_star, exponent = strong_converse_exponent(q.rate, q.p, q.d_a)
    return BoundRow(var, s_star, exponent, min(1.0, math.exp(-q.n * exponent)), "renyi")


def _hockey_row(q, var):
    try:
        return BoundRow(var, math.nan, hockey_exponent(q), fidelity_bound_hockey(q), "hockey")
    except (QConverseError, ValueError) as exc:
        return BoundRow(var, math.nan, math.nan, math.nan, "hockey", error=f"{type(exc).__name__}: {exc}")


def curve_sweep(q, over_n=None, over_rate=None, method="renyi"):
    """Evaluate the bounds over a list of ``n`` or of rates, other fields from ``q``.

    Rows are sorted by the swept value; with ``method="both"`` each point
    gives a Renyi row followed by a hockey-stick row. A point whose bound is
    undefined yields a row of NaNs with ``error`` set instead of raising.
    """
    if (over_n is None) == (over_rate is None):
        raise ValueError("give exactly one of over_n, over_rate")
    if method not in ("renyi", "hockey", "both"):
        raise ValueError(f"unknown method {method!r}")
    values = sorted(over_n if over_n is not None else over_rate)
    if not values:
        raise ValueError("sweep list is empty")
    rows = []
    for v in values:
        if over_n is not None:
            point = BoundQuery(int(v), q.rate, q.p, q.d_a)
        else:
            point = BoundQuery(q.n, float(v), q.p, q.d_a)
        if method in ("renyi", "both"):
            rows.append(_renyi_row(point, v))
        if method in ("hockey", "both"):
            rows.append(_hockey_row(point, v))
    return BoundCurve(q, "n" if over_n is not None else "rate", rows)


def identity_decoding_protocol(d_a, p, n):
    """Send half of a rank ``d_a**n`` maximally entangled state through ``n``
    erasure channels and decode each use with :func:`erasure_decoder`.

    Returns ``(rho_out, fidelity, rate)``: the channel output on ``A B^n``
    before decoding, the achieved entanglement fidelity, and ``ln d_a``.
    """
    phi = maximally_entangled(d_a**n)
    rho_out = apply_to_B(tensor_power(erasure_channel(d_a, p), n, phi.dim_a), phi)
    decoded = apply_to_B(tensor_power(erasure_decoder(d_a), n, phi.dim_a), rho_out)
    fidelity = float(np.trace(phi.op @ decoded.op).real)
    return rho_out, fidelity, math.log(d_a)
