# %% [markdown]
# Random sparse matrices with exactly d ones per column, and how many rows a
# handful of columns touch.

# %%
import numpy as np

import sparse_expanders as se

A = se.generate(n=32, N=64, d=4, ensemble="SSE", seed=7)
print(A.to_dense()[:, :6])
print("nonzeros per column:", np.count_nonzero(A.to_dense(), axis=0)[:6])

# %% [markdown]
# The neighbour count of a column set S is the number of rows hit by any of
# its columns. A lossless expander keeps it near d|S|.

# %%
for S in ([0], [0, 1], [0, 1, 2, 3], list(range(8))):
    count = se.neighbor_count(A, S)
    print(f"|S|={len(S):2d}  |A_S|={count:3d}  d|S|={4 * len(S):3d}")

# %%
x = np.zeros(64)
x[[3, 10, 40]] = [1.0, -2.0, 0.5]
y = se.apply(A, x)
print("||Ax||_1 / (d ||x||_1) =", np.abs(y).sum() / (4 * np.abs(x).sum()))
