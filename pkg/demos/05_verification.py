# %% [markdown]
# Exhaustive check of the expansion property for small matrices.

# %%
import sparse_expanders as se

A = se.generate(n=64, N=16, d=4, seed=3)
verdict = se.verify_expander_exhaustive(A, k=2, eps=0.25)
print(verdict.passed, verdict.checked, verdict.min_expansion)

# %% [markdown]
# Two equal columns touch only d rows together, which breaks expansion for
# any eps < 1/2.

# %%
supports = A.supports.copy()
supports[5] = supports[0]
B = se.SparseColumnMatrix(64, 16, 4, supports)
verdict = se.verify_expander_exhaustive(B, k=2, eps=0.25)
print(verdict.passed, verdict.witness, verdict.witness_neighbors)
