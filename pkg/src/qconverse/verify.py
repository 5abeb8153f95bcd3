"""Seeded property suites checking the inequalities the package relies on.

Each suite returns a list of :class:`PropertyResult`; ``run_suites`` is what
the ``verify`` command prints. All randomness derives from one integer seed.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .channel import (
    apply_to_B,
    erasure_block_decomposition,
    erasure_channel,
    random_channel,
    recombine,
    tensor_power,
)
from .divergence import coherent_information, hockey_stick, renyi_divergence
from .exponent import (
    OptimizerOptions,
    g_derivative,
    g_function,
    k_lambda,
    k_lambda_numeric,
    order_from_s,
)
from .linalg import (
    BipartiteOperator,
    maximally_entangled,
    partial_trace,
    random_bipartite_density,
    random_density,
)

MONO_TOL = 1e-9
ORACLE_TOL = 1e-6
RENYI_ORDERS = (1.25, 1.5, 2.0)
GAMMAS = (1.0, 2.0, 5.0)
ERASURE_PS = (0.1, 0.25, 0.4)
THEOREM3_S = (-0.5, -0.25, -0.1)
CHERNOFF_NS = (50, 100, 200)
# rates above capacity used for the Chernoff-term comparison, by p
CHERNOFF_RATES = {0.1: 0.65, 0.25: 0.45, 0.4: 0.45}


@dataclass(frozen=True)
class PropertyResult:
    suite: str
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} [{self.suite}] {self.name}: {self.detail}"


def subseed(seed, *keys):
    """64-bit child seed for ``(seed, *keys)``."""
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1, np.uint64)[0])


def _random_triple(seed, i):
    rng = np.random.default_rng(subseed(seed, 1, i))
    d = int(rng.integers(2, 4))
    d_out = int(rng.integers(2, 4))
    d_env = int(rng.integers(1, 4))
    while d_out * d_env < d:
        d_env += 1
    rho = random_density(d, subseed(seed, 2, i))
    sigma = random_density(d, subseed(seed, 3, i))
    ch = random_channel(d, d_out, d_env, subseed(seed, 4, i))
    return rho, sigma, ch


def suite_mono(seed, n_triples=200, n_pairs=100):
    out = []
    worst_r, worst_h = -np.inf, -np.inf
    for i in range(n_triples):
        rho, sigma, ch = _random_triple(seed, i)
        rho_out, sigma_out = ch(rho), ch(sigma)
        for lam in RENYI_ORDERS:
            gap = renyi_divergence(rho_out, sigma_out, lam) - renyi_divergence(rho, sigma, lam)
            worst_r = max(worst_r, gap)
        for gamma in GAMMAS:
            gap = hockey_stick(rho_out, sigma_out, gamma) - hockey_stick(rho, sigma, gamma)
            worst_h = max(worst_h, gap)
    out.append(
        PropertyResult(
            "mono", "renyi data processing", worst_r <= MONO_TOL,
            f"{n_triples} triples x {len(RENYI_ORDERS)} orders, max increase {worst_r:.3e}",
        )
    )
    out.append(
        PropertyResult(
            "mono", "hockey-stick data processing", worst_h <= MONO_TOL,
            f"{n_triples} triples x {len(GAMMAS)} gammas, max increase {worst_h:.3e}",
        )
    )
    worst_k = -np.inf
    for i in range(n_pairs):
        rng = np.random.default_rng(subseed(seed, 5, i))
        da, db, d_out, d_env = (int(x) for x in rng.integers(2, 4, size=4))
        rho = random_bipartite_density(da, db, subseed(seed, 6, i))
        ch = random_channel(db, d_out, d_env, subseed(seed, 7, i))
        lam = RENYI_ORDERS[i % len(RENYI_ORDERS)]
        worst_k = max(worst_k, k_lambda(apply_to_B(ch, rho), lam) - k_lambda(rho, lam))
    out.append(
        PropertyResult(
            "mono", "K_lambda data processing", worst_k <= MONO_TOL,
            f"{n_pairs} pairs, max increase {worst_k:.3e}",
        )
    )
    return out


SIBSON_SHAPES = ((2, 2), (2, 3), (3, 2), (3, 3))


def sibson_instances(seed, count=20):
    for i in range(count):
        da, db = SIBSON_SHAPES[i % len(SIBSON_SHAPES)]
        yield i, random_bipartite_density(da, db, subseed(seed, 8, i))


def suite_sibson(seed, count=20):
    matches, worst = 0, 0.0
    for i, rho in sibson_instances(seed, count):
        ok = True
        for lam in RENYI_ORDERS:
            opts = OptimizerOptions(seed=subseed(seed, 9, i))
            err = abs(k_lambda(rho, lam) - k_lambda_numeric(rho, lam, opts))
            worst = max(worst, err)
            ok = ok and err <= ORACLE_TOL
        matches += ok
    return [
        PropertyResult(
            "sibson", "closed form equals numeric infimum", matches == count,
            f"{matches}/{count} oracle matches, max |diff| {worst:.3e}",
        )
    ]


def suite_theorem2(seed, count=20, grid=64):
    worst_g0, worst_d, worst_fd, worst_inc = 0.0, 0.0, 0.0, np.inf
    s_grid = np.linspace(-0.5, 0.0, grid)
    for i in range(count):
        rng = np.random.default_rng(subseed(seed, 10, i))
        da, db = (int(x) for x in rng.integers(2, 4, size=2))
        sigma = random_bipartite_density(da, db, subseed(seed, 11, i))
        ci = coherent_information(sigma)
        worst_g0 = max(worst_g0, abs(g_function(sigma, 0.0)))
        worst_d = max(worst_d, abs(g_derivative(sigma, 0.0, "analytic") - ci))
        fd = g_derivative(sigma, 0.0, "finite_difference")
        worst_fd = max(worst_fd, abs(fd - ci) / max(abs(ci), 1e-12))
        vals = np.array([g_function(sigma, s) + (s + 1.0) * math.log(da) for s in s_grid])
        worst_inc = min(worst_inc, float(np.min(np.diff(vals))))
    return [
        PropertyResult("theorem2", "g(0) = 0", worst_g0 <= 1e-12, f"max |g(0)| {worst_g0:.3e}"),
        PropertyResult(
            "theorem2", "analytic g'(0) = coherent information", worst_d <= 1e-10,
            f"max |diff| {worst_d:.3e}",
        ),
        PropertyResult(
            "theorem2", "finite-difference g'(0) = coherent information", worst_fd <= 1e-4,
            f"max relative diff {worst_fd:.3e}",
        ),
        PropertyResult(
            "theorem2", "g(s) + (s+1) ln|A| nondecreasing", worst_inc >= -1e-9,
            f"{count} states x {grid} points, min increment {worst_inc:.3e}",
        ),
    ]


def erasure_output(d_a, p, n):
    phi = maximally_entangled(d_a**n)
    return phi, apply_to_B(tensor_power(erasure_channel(d_a, p), n, phi.dim_a), phi)


def suite_erasure(seed):
    out = []
    d_a = 2
    # block decomposition reproduces the channel output
    worst_dec, worst_orth, worst_proj = 0.0, 0.0, 0.0
    for p in ERASURE_PS:
        for n in (1, 2):
            phi, rho = erasure_output(d_a, p, n)
            blocks = erasure_block_decomposition(d_a, p, n, phi)
            worst_dec = max(worst_dec, np.linalg.norm(recombine(blocks).op - rho.op))
            for i, b in enumerate(blocks):
                for c in blocks[i + 1 :]:
                    worst_orth = max(worst_orth, abs(np.trace(b.state.op @ c.state.op)))
            for k in range(n + 1):
                worst_proj = max(worst_proj, _projector_defect(phi, d_a, n, k))
    out.append(
        PropertyResult(
            "erasure", "block decomposition", worst_dec <= 1e-10 and worst_orth <= 1e-12,
            f"recombination error {worst_dec:.3e}, max block overlap {worst_orth:.3e}",
        )
    )
    out.append(
        PropertyResult(
            "erasure", "d^k rho_(A A'_(n-k)) is a rank d^k projector", worst_proj <= 1e-9,
            f"max eigenvalue defect {worst_proj:.3e}",
        )
    )

    # K_lambda(A>B^n) <= n E0(s)/s
    worst = -np.inf
    for p in ERASURE_PS:
        for n in (1, 2):
            _, rho = erasure_output(d_a, p, n)
            for s in THEOREM3_S:
                k = k_lambda(rho, order_from_s(s))
                worst = max(worst, k - n * bounds.erasure_e0(p, d_a, s) / s)
    out.append(
        PropertyResult(
            "erasure", "K_lambda(A>B^n) <= n E0(s)/s", worst <= 1e-9,
            f"max excess {worst:.3e}",
        )
    )

    # exponent vanishes below capacity and is positive above it
    bad = []
    for p in ERASURE_PS + (0.6,):
        cap = bounds.erasure_capacity(p, d_a)
        for rate in np.linspace(0.0, 1.2, 41):
            if abs(rate - cap) < 1e-3 or (rate == 0.0 and p > 0.5):
                continue
            _, e = bounds.strong_converse_exponent(float(rate), p, d_a)
            if (rate < cap and e != 0.0) or (rate > cap and not e > 0.0):
                bad.append((p, float(rate), e))
        for rate in (cap - 1e-3, cap + 1e-3):
            if rate <= 0:
                continue
            _, e = bounds.strong_converse_exponent(rate, p, d_a)
            if (rate < cap and e != 0.0) or (rate > cap and not e > 0.0):
                bad.append((p, rate, e))
    out.append(
        PropertyResult(
            "erasure", "exponent threshold at capacity", not bad,
            "all grid rates behave" if not bad else f"violations {bad[:3]}",
        )
    )

    # exact binomial tail at the cutoff vs the closed-form second term
    rows, ok_term, ok_chernoff = [], True, True
    for p in ERASURE_PS:
        for n in CHERNOFF_NS:
            q = bounds.BoundQuery(n, CHERNOFF_RATES[p], p, d_a)
            m = bounds.hockey_cutoff(q)
            tail = bounds.binomial_tail(n, m, p) if m >= 0 else 0.0
            t2 = bounds.hockey_terms(q)[1]
            ok_term = ok_term and tail <= t2
            ok_chernoff = ok_chernoff and tail <= bounds.chernoff_lower_tail(n, m, p)
            if tail > t2:
                rows.append(f"p={p} n={n}: tail {tail:.3e} > term {t2:.3e}")
    out.append(
        PropertyResult(
            "erasure", "binomial tail <= closed-form hockey-stick term", ok_term,
            "holds on all points" if ok_term else f"{len(rows)} violations, e.g. {rows[0]}",
        )
    )
    out.append(
        PropertyResult(
            "erasure", "binomial tail <= exp(-n KL(m/n||p))", ok_chernoff,
            "holds on all points" if ok_chernoff else "violated",
        )
    )

    # fidelity/rate inequality on identity-decoding protocols
    worst = np.inf
    for p in ERASURE_PS:
        for n in (1, 2):
            rho_out, fid, rate = bounds.identity_decoding_protocol(d_a, p, n)
            for f in (fid, (1.0 - p) ** n):
                for lam in RENYI_ORDERS:
                    worst = min(worst, bounds.theorem1_slack(f, n, rate, lam, rho_out=rho_out))
    out.append(
        PropertyResult(
            "erasure", "K_lambda >= D_lambda(F||e^-nR) on identity decoding", worst >= -1e-9,
            f"min slack {worst:.3e}",
        )
    )
    return out


def _projector_defect(phi, d_a, n, k):
    """Max distance of the spectrum of ``d^k rho_(A A'_1..A'_(n-k))`` from {0, 1},
    plus a rank mismatch indicator."""
    keep = d_a ** (n - k)
    traced = partial_trace(BipartiteOperator(phi.op, phi.dim_a * keep, d_a**k), "B")
    w = np.linalg.eigvalsh(d_a**k * traced)
    defect = float(np.max(np.minimum(np.abs(w), np.abs(w - 1.0))))
    rank = int(np.sum(w > 0.5))
    return defect if rank == d_a**k else np.inf


SUITES = {
    "mono": suite_mono,
    "sibson": suite_sibson,
    "theorem2": suite_theorem2,
    "erasure": suite_erasure,
}


def run_suites(suite="all", seed=0):
    names = list(SUITES) if suite == "all" else [suite]
    results = []
    for name in names:
        results.extend(SUITES[name](seed))
    return results
