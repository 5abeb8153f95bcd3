# %% [markdown]
# Renyi and hockey-stick divergences
#
# Two qubit states, their divergences, and what a channel does to them.

# %%
import numpy as np

from qconverse import channel, divergence, linalg

rho = linalg.random_density(2, seed=1)
sigma = linalg.random_density(2, seed=2)
print("rho =\n", np.round(rho, 4))
print("sigma =\n", np.round(sigma, 4))

# %%
# D_lambda grows with the order.
for lam in (1.1, 1.5, 2.0):
    print(f"D_{lam}(rho||sigma) = {divergence.renyi_divergence(rho, sigma, lam):.6f}")

# %%
# Pushing both states through a channel can only bring them closer.
ch = channel.random_channel(2, 3, 2, seed=7)
for lam in (1.5, 2.0):
    before = divergence.renyi_divergence(rho, sigma, lam)
    after = divergence.renyi_divergence(ch(rho), ch(sigma), lam)
    print(f"lambda={lam}: {before:.6f} -> {after:.6f}")

for gamma in (1.0, 2.0):
    before = divergence.hockey_stick(rho, sigma, gamma)
    after = divergence.hockey_stick(ch(rho), ch(sigma), gamma)
    print(f"gamma={gamma}: Tr(rho - gamma sigma)^+ {before:.6f} -> {after:.6f}")

# %%
# The binary divergence used for fidelities: diag(F, 1-F) against diag(b, 1/b - b).
F, beta = 0.75, 0.5
print("D_2(0.75 || 0.5) =", divergence.binary_renyi(F, beta, 2.0))

# %%
# A state whose support leaks outside sigma's support has infinite divergence.
pure = np.diag([1.0, 0.0])
print(divergence.renyi_divergence(np.eye(2) / 2, pure, 1.5))
