# %% [markdown]
# Log-domain bound on P(|A_s| <= a_s), against exact probabilities where
# those can be computed.

# %%
import math

import numpy as np

import sparse_expanders as se

n, d, s = 256, 4, 8
pmf = se.exact_union_distribution(n, d, s)
cdf = np.cumsum(pmf)
top = se.expected_profile(s, d, n).top
print(f"E|A_{s}| = {top:.4f}")
for a in (12, 16, 20, 24, 28, int(top)):
    r = se.tail_bound(s, d, n, a)
    exact = math.log(cdf[a]) if cdf[a] > 0 else -math.inf
    print(f"a_s={a:3d}  ln P exact={exact:9.3f}  bound={r.log_bound:9.3f}  case={r.case}")

# %% [markdown]
# The profile behind a constrained bound: every level satisfies the cubic
# relation and the top is pinned to the target.

# %%
profile = se.constrained_profile(16, 8, 1024, 100.0)
for i, a in profile.levels:
    print(f"a_{i:<3} = {a:.6f}")

# %% [markdown]
# Requiring expansion (1 - eps) d s fails with a probability that shrinks as
# eps grows.

# %%
for eps in (0.05, 0.1, 1 / 6, 0.25, 0.4):
    print(f"eps={eps:.3f}  ln P <= {se.rip1_failure_bound(32, 16, 4096, eps).log_bound:10.2f}")
