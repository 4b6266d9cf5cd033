# %% [markdown]
# # Separation rates and detection boundaries
#
# Closed-form quantities that come with the tests: the minimax lower bound
# on eps (1 - eps) (mu2 - mu1)^2, the margin that guarantees power at a
# given scale, and the asymptotic detection boundaries.

# %%
import numpy as np

import mixdetect as md
from mixdetect import theory

print("lower bound rho*(n=100, a=.05, b=.05, M=.1) =", theory.rho_lower_bound(100, 0.05, 0.05, 0.1))
print("power margin rho(k=16, n=100, b=.05)        =", theory.rho_k_n(16, 100, 0.05))

# %% [markdown]
# ## Boundaries
#
# Dense: r* = 1/4 - delta/2. Sparse Gaussian has a kink at delta = 3/4,
# sparse Laplace is linear.

# %%
for regime in theory.Regime:
    lo, hi = regime.delta_range()
    deltas = np.linspace(lo, hi, 7)[1:-1]
    row = " ".join(f"{theory.detection_boundary(regime, d):.3f}" for d in deltas)
    print(f"{regime.value:>16}: {row}")

# %% [markdown]
# ## Which mixtures come with a guarantee?
#
# A triple is in the separation set at scale k when some cut point c
# leaves enough mass on both sides of the analytic threshold.

# %%
table = md.calibrate(1000, md.GAUSSIAN, 0.05, budget=20_000, seed=0)
k = 64
rho = theory.rho_k_n(k, 1000, 0.1)
for eps, mu2 in [(0.5, 1.0), (0.5, 6.0), (0.1, 8.0), (0.02, 12.0)]:
    m = theory.separation_set_member(eps, 0.0, mu2, table.alpha_n, rho, k, 1000)
    print(f"eps={eps:<5} mu2={mu2:<5} member={m.member} witness={m.witness}")

# %% [markdown]
# ## Side conditions

# %%
for n in (40, 49, 107, 111):
    print(theory.check_side_conditions(n, 0.05, M=0.1).to_dict())
