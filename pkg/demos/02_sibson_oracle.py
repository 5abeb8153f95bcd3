# %% [markdown]
# K_lambda: closed form versus brute-force search
#
# K_lambda(A>B) is an infimum over states sigma_B. The closed form picks the
# optimal sigma directly; the oracle searches for it with Nelder-Mead.

# %%
import time

import numpy as np

from qconverse import exponent, linalg
from qconverse.divergence import renyi_divergence

rho = linalg.random_bipartite_density(2, 3, seed=11)

# %%
for lam in (1.25, 1.5, 2.0):
    t0 = time.perf_counter()
    numeric = exponent.k_lambda_numeric(rho, lam, exponent.OptimizerOptions(seed=0))
    closed = exponent.k_lambda(rho, lam)
    print(f"lambda={lam}: closed {closed:.10f}  search {numeric:.10f}  "
          f"diff {abs(closed - numeric):.1e}  ({time.perf_counter() - t0:.1f} s)")

# %%
# The optimizer of the closed form is itself a state, and plugging it back
# in gives the same value.
sigma_star = exponent.sibson_state(rho, 2.0)
print(np.round(sigma_star, 4))
print(renyi_divergence(rho.op, np.kron(np.eye(2), sigma_star), 2.0), exponent.k_lambda(rho, 2.0))

# %%
# g(s) = s K_{1/(1+s)} vanishes at s = 0, and its slope there is the coherent
# information.
from qconverse.divergence import coherent_information

print("g(0)        =", exponent.g_function(rho, 0.0))
print("g'(0)       =", exponent.g_derivative(rho, 0.0))
print("I(A>B)      =", coherent_information(rho))
print("g'(0) by FD =", exponent.g_derivative(rho, 0.0, "finite_difference"))
