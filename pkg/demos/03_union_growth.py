# %% [markdown]
# Monte Carlo sizes of A_k for d=8, n=1024, compared with the expected
# value n (1 - (1 - d/n)^k).

# %%
import numpy as np

import sparse_expanders as se
from sparse_expanders.montecarlo import default_k_grid

config = se.SimulationConfig(n=1024, d=8, k_grid=default_k_grid(1024), trials=500, seed=0)
result = se.simulate_cardinalities(config)
for k in config.k_grid:
    print(f"k={k:5d}  mean={result.means[k]:9.3f}  expected={result.expected[k]:9.3f}"
          f"  rel err={result.rel_error[k]:.2e}")
print("largest relative error:", result.max_rel_error)

# %% [markdown]
# The spread of |A_k| at a single k, which the expected value hides.

# %%
samples = result.samples[64]
print("k=64 quantiles:", np.percentile(samples, [1, 25, 50, 75, 99]))

# %% [markdown]
# Rare small unions: identical supports for two columns happen with
# probability 1/C(8,2) = 1/28.

# %%
est = se.empirical_tail(8, 2, 2, 2, 10 ** 5, seed=1)
print(f"frequency {est.frequency:.4f} +- {est.radius:.4f}, exact {1 / 28:.4f}")
