# %% [markdown]
# The hockey-stick route and its Chernoff step
#
# The hockey-stick bound splits into an exponential term and a binomial tail
# over erasure counts. Here we compare the exact tail with two closed forms.

# %%
from qconverse import bounds

p, d, rate = 0.25, 2, 0.45

# %%
print(" n    m   exact tail     closed term    exp(-n KL)")
for n in (50, 100, 200, 400):
    q = bounds.BoundQuery(n, rate, p, d)
    m = bounds.hockey_cutoff(q)
    tail = bounds.binomial_tail(n, m, p)
    term = bounds.hockey_terms(q)[1]
    kl = bounds.chernoff_lower_tail(n, m, p)
    print(f"{n:>4} {m:>4}   {tail:.4e}     {term:.4e}     {kl:.4e}")

# The middle column sits below the exact tail, so it cannot stand in for it.
# The relative-entropy Chernoff bound on the right does dominate.

# %%
# The exact hockey-stick divergence of the erasure output, block by block.
q = bounds.BoundQuery(100, rate, p, d)
print("Tr(rho - gamma 1 (x) rho_B)^+ =", bounds.hockey_divergence_erasure(q))
print("two-term bound               =", bounds.fidelity_bound_hockey(q))
