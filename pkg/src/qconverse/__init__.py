"""Renyi-divergence converse bounds on the fidelity of quantum codes.

Submodules:

- ``linalg``: Hermitian functional calculus, partial traces, state factories
- ``divergence``: Renyi and hockey-stick divergences, entropies
- ``channel``: Kraus channels, the erasure channel and its block structure
- ``exponent``: K_lambda, its numeric oracle, g(s) and E0(s)
- ``bounds``: fidelity bounds and strong-converse exponents
- ``fileio``, ``cli``, ``verify``: file formats, command line, property suites
"""
from .bounds import (
    BoundQuery,
    curve_sweep,
    erasure_capacity,
    erasure_e0,
    fidelity_bound_hockey,
    fidelity_bound_renyi,
    strong_converse_exponent,
    theorem1_slack,
)
from .channel import apply_to_B, erasure_channel, make_channel, random_channel, tensor_power
from .divergence import (
    binary_hockey_stick,
    binary_renyi,
    coherent_information,
    hockey_stick,
    renyi_divergence,
    von_neumann_entropy,
)
from .exponent import (
    OptimizerOptions,
    e0_channel,
    g_derivative,
    g_function,
    k_hockey_numeric,
    k_lambda,
    k_lambda_numeric,
    sibson_state,
)
from .linalg import (
    BipartiteOperator,
    eig_hermitian,
    matrix_power,
    maximally_entangled,
    partial_trace,
    positive_part,
    random_density,
    tensor_product,
)

__version__ = "0.1.0"
