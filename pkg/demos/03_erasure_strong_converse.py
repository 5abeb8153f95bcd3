# %% [markdown]
# Strong converse for the erasure channel
#
# Above capacity the fidelity of any code decays like exp(-n E) where E is the
# best exponent E0(s) - s R over s in [-1/2, 0].

# %%
import math

import numpy as np

from qconverse import bounds

p, d = 0.25, 2
Q = bounds.erasure_capacity(p, d)
print(f"capacity Q = {Q:.6f} nats ({Q / math.log(2):.3f} qubits) per use")

# %%
# Below Q the exponent is zero; above it turns on.
for rate in np.linspace(0.2, 0.7, 11):
    s_star, e = bounds.strong_converse_exponent(rate, p, d)
    print(f"R={rate:.3f}  s*={s_star:+.4f}  exponent={e:.6f}")

# %%
# Fidelity bounds at R = 0.45 for growing block length.
q = bounds.BoundQuery(100, 0.45, p, d)
curve = bounds.curve_sweep(q, over_n=[25, 50, 100, 200, 400], method="both")
for row in curve.rows:
    print(f"n={row.sweep_var:>4}  {row.method:<6}  bound={row.fidelity_bound:.4e}")

# %%
# Same sweep as CSV, ready for any plotting tool.
print(curve.to_csv())

# %%
# For p above 1/2 the capacity is zero and every positive rate decays.
print(bounds.strong_converse_exponent(0.1, 0.6, 2))
