# %% [markdown]
# Where the union bound over all column sets stops guaranteeing expansion.
# net_exponent(k) > 0 means the bound is useless at that k; rho_exp is the
# largest sparsity ratio k/n before the last sign change.

# %%
import sparse_expanders as se
from sparse_expanders.errors import NoTransitionError

# at n = 1024 the polynomial 3 s ln(5d) term keeps the exponent positive
for d in (4, 8, 16, 32):
    try:
        print(d, se.rho_exp(0.5, d, 1 / 6, 1024))
    except NoTransitionError as exc:
        print(f"d={d}: no transition, minimum exponent {exc.diagnostics['min']:.4f}")

# %% [markdown]
# Larger problems have a transition.

# %%
curve = se.sweep([0.1, 0.3, 0.5, 0.7, 0.9], d=256, eps=1 / 6, n=2 ** 16)
for delta, rho in zip(curve.delta_grid, curve.rho_values):
    print(f"delta={delta:.1f}  rho={rho:.3e}")

# %%
for eps in (1 / 16, 1 / 6, 1 / 4):
    print(f"eps={eps:.4f}  rho={se.rho_exp(0.5, 256, eps, 2 ** 16):.3e}")
