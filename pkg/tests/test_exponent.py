import math

import numpy as np
import pytest

from qconverse.bounds import erasure_e0
from qconverse.channel import apply_to_B, erasure_channel, identity_channel, random_channel
from qconverse.divergence import coherent_information, hockey_stick, renyi_divergence
from qconverse.errors import BadDimensions, NotConverged
from qconverse.exponent import (
    OptimizerOptions,
    compare_g_derivatives,
    e0_channel,
    g_derivative,
    g_function,
    k_hockey_numeric,
    k_lambda,
    k_lambda_numeric,
    order_from_s,
    s_from_order,
    sibson_state,
)
from qconverse.linalg import (
    bipartite_product,
    maximally_entangled,
    partial_trace,
    random_bipartite_density,
    random_density,
    tensor_product,
)

LN2 = math.log(2)


def product_state(seed=1):
    return bipartite_product(np.eye(2) / 2, random_density(3, seed))


def test_order_s_bijection():
    for lam in (1.01, 1.25, 1.5, 2.0):
        s = s_from_order(lam)
        assert -0.5 <= s < 0
        assert math.isclose(order_from_s(s), lam)


def test_k_lambda_maximally_entangled():
    assert math.isclose(k_lambda(maximally_entangled(2), 2.0), LN2, rel_tol=1e-12)


@pytest.mark.parametrize("lam", [1.25, 1.5, 2.0])
def test_k_lambda_product(lam):
    assert math.isclose(k_lambda(product_state(), lam), -LN2, rel_tol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_k_lambda_below_feasible_point(seed):
    rho = random_bipartite_density(2, 3, seed)
    feasible = renyi_divergence(rho.op, tensor_product(np.eye(2), partial_trace(rho, "A")), 1.5)
    assert k_lambda(rho, 1.5) <= feasible + 1e-12


def test_sibson_state_examples():
    np.testing.assert_allclose(sibson_state(maximally_entangled(2), 2.0), np.eye(2) / 2, atol=1e-14)
    rb = random_density(3, 4)
    np.testing.assert_allclose(sibson_state(bipartite_product(random_density(2, 3), rb), 2.0), rb, atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("lam", [1.25, 2.0])
def test_sibson_state_attains_closed_form(seed, lam):
    rho = random_bipartite_density(3, 2, seed)
    sigma = sibson_state(rho, lam)
    assert abs(np.trace(sigma) - 1) <= 1e-12
    value = renyi_divergence(rho.op, tensor_product(np.eye(3), sigma), lam)
    assert abs(value - k_lambda(rho, lam)) <= 1e-10


def test_k_lambda_numeric_examples():
    assert abs(k_lambda_numeric(maximally_entangled(2), 2.0) - LN2) <= 1e-6
    prod = bipartite_product(np.eye(2) / 2, random_density(2, 5))
    assert abs(k_lambda_numeric(prod, 1.5) + LN2) <= 1e-6


@pytest.mark.parametrize("seed", range(3))
def test_k_lambda_numeric_random(seed):
    rho = random_bipartite_density(2, 3, 40 + seed)
    assert abs(k_lambda_numeric(rho, 1.25, OptimizerOptions(seed=seed)) - k_lambda(rho, 1.25)) <= 1e-6


def test_k_lambda_numeric_is_deterministic():
    rho = random_bipartite_density(2, 2, 9)
    opts = OptimizerOptions(seed=3, starts=2)
    assert k_lambda_numeric(rho, 1.5, opts) == k_lambda_numeric(rho, 1.5, opts)


def test_k_lambda_numeric_not_converged():
    with pytest.raises(NotConverged):
        k_lambda_numeric(random_bipartite_density(2, 3, 1), 2.0, OptimizerOptions(max_iters=5, starts=2))


def test_oracle_size_guard():
    with pytest.raises(BadDimensions):
        k_lambda_numeric(random_bipartite_density(1, 5, 1), 2.0)


def test_g_at_zero():
    for seed in range(5):
        assert abs(g_function(random_bipartite_density(2, 3, seed), 0.0)) <= 1e-12


def test_g_examples():
    assert math.isclose(g_function(maximally_entangled(2), -0.5), -0.5 * LN2, rel_tol=1e-12)
    assert math.isclose(g_function(product_state(), -0.5), 0.5 * LN2, rel_tol=1e-12)


def test_g_rejects_out_of_range():
    with pytest.raises(ValueError):
        g_function(maximally_entangled(2), -0.6)
    with pytest.raises(ValueError):
        g_function(maximally_entangled(2), 0.1)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("s", [-0.5, -0.3, -0.1])
def test_g_is_s_times_k(seed, s):
    rho = random_bipartite_density(3, 2, seed)
    assert abs(g_function(rho, s) - s * k_lambda(rho, order_from_s(s))) <= 1e-12


def test_g_derivative_examples():
    assert math.isclose(g_derivative(maximally_entangled(2), 0.0), LN2, rel_tol=1e-12)
    assert math.isclose(g_derivative(product_state(), 0.0), -LN2, rel_tol=1e-12)
    fd = g_derivative(maximally_entangled(2), 0.0, "finite_difference")
    assert math.isclose(fd, LN2, rel_tol=1e-4)


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("s", [-0.5, -0.4, -0.25, -0.1, 0.0])
def test_g_derivative_methods_agree(seed, s):
    rho = random_bipartite_density(2 + seed % 2, 2 + (seed // 2) % 2, 60 + seed)
    cmp = compare_g_derivatives(rho, s)
    assert cmp.agree, cmp


def test_g_derivative_unknown_method():
    with pytest.raises(ValueError):
        g_derivative(maximally_entangled(2), 0.0, "secant")


@pytest.mark.parametrize("seed", range(5))
def test_g_derivative_at_zero_is_coherent_information(seed):
    rho = random_bipartite_density(3, 3, seed)
    assert abs(g_derivative(rho, 0.0) - coherent_information(rho)) <= 1e-10


def test_g_derivative_rank_deficient_state():
    # pure entangled state with unequal Schmidt coefficients
    psi = np.array([math.sqrt(0.8), 0, 0, math.sqrt(0.2)])
    from qconverse.linalg import BipartiteOperator

    rho = BipartiteOperator(np.outer(psi, psi), 2, 2)
    h = -(0.8 * math.log(0.8) + 0.2 * math.log(0.2))
    assert math.isclose(g_derivative(rho, 0.0), h, rel_tol=1e-12)
    assert compare_g_derivatives(rho, -0.3).agree


@pytest.mark.parametrize("seed", range(5))
def test_g_plus_log_dim_is_nondecreasing(seed):
    rho = random_bipartite_density(3, 2, seed)
    s = np.linspace(-0.5, 0.0, 64)
    vals = [g_function(rho, x) + (x + 1) * math.log(3) for x in s]
    assert np.min(np.diff(vals)) >= -1e-9


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("s", [-0.5, -0.2, 0.0])
def test_e0_identity_channel(d, s):
    assert math.isclose(e0_channel(identity_channel(d), maximally_entangled(d), s), s * math.log(d), abs_tol=1e-12)


@pytest.mark.parametrize("p", [0.1, 0.25, 0.4, 0.7])
@pytest.mark.parametrize("s", [-0.5, -0.25, -0.1, 0.0])
def test_e0_erasure_matches_closed_form(p, s):
    assert abs(e0_channel(erasure_channel(2, p), maximally_entangled(2), s) - erasure_e0(p, 2, s)) <= 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_e0_is_s_times_k_of_output(seed):
    rho = random_bipartite_density(2, 3, seed)
    ch = random_channel(3, 2, 3, seed)
    s = -0.1 - 0.04 * seed
    out = apply_to_B(ch, rho)
    assert abs(e0_channel(ch, rho, s) - s * k_lambda(out, order_from_s(s))) <= 1e-10


def test_k_hockey_product_is_zero():
    assert k_hockey_numeric(product_state(), 1.0) <= 1e-8


def test_k_hockey_maximally_entangled():
    phi = maximally_entangled(2)
    feasible = hockey_stick(phi.op, tensor_product(np.eye(2), np.eye(2) / 2), 1.0)
    # eigenvalues of phi - I/2 are {1/2, -1/2, -1/2, -1/2}
    assert math.isclose(feasible, 0.5, abs_tol=1e-14)
    value = k_hockey_numeric(phi, 1.0)
    assert 0.0 <= value <= feasible + 1e-8
    # the twirl-invariant point I/2 is optimal for this convex objective
    assert abs(value - 0.5) <= 1e-6


@pytest.mark.parametrize("seed", range(3))
def test_k_hockey_large_gamma(seed):
    rho = random_bipartite_density(2, 2, seed)
    gamma = 2 * np.linalg.eigvalsh(rho.op).max()
    gamma = max(gamma, 1.0)
    assert k_hockey_numeric(rho, gamma, OptimizerOptions(starts=2)) <= 1e-12


@pytest.mark.parametrize("seed", range(3))
def test_k_hockey_below_marginal_feasible_point(seed):
    rho = random_bipartite_density(2, 2, 20 + seed)
    feasible = hockey_stick(rho.op, tensor_product(np.eye(2), partial_trace(rho, "A")), 1.0)
    assert k_hockey_numeric(rho, 1.0, OptimizerOptions(starts=3)) <= feasible + 1e-12


def _petz(rho, sigma, alpha):
    from scipy.linalg import fractional_matrix_power as fmp

    return math.log(np.trace(fmp(rho, alpha) @ fmp(sigma, 1 - alpha)).real) / (alpha - 1)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("lam", [1.25, 1.5, 2.0])
def test_sibson_identity_gives_unique_minimizer(seed, lam):
    # D_lam(rho || 1 (x) sigma) - K_lam = D_lam(sigma* || sigma), which is
    # zero only at sigma = sigma*
    rho = random_bipartite_density(2, 3, 100 + seed)
    star = sibson_state(rho, lam)
    for k in range(3):
        sigma = random_density(3, 1000 * seed + k)
        excess = renyi_divergence(rho.op, tensor_product(np.eye(2), sigma), lam) - k_lambda(rho, lam)
        assert abs(excess - _petz(star, sigma, lam)) <= 1e-10
        assert excess > 1e-6
