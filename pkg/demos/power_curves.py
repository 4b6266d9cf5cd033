# %% [markdown]
# # Power curves for a very sparse mixture
#
# Setting: n = 1000, eps = 0.001, so the expected number of shifted points
# is one. The spacing test picks it up through the extreme scales, while
# the variance test only reacts once the shift is large.
#
# This is a small-budget version (2000 replicates per cell); raise ``reps``
# and ``calibration_budget`` to 100000 for publication-grade numbers.

# %%
import mixdetect as md

experiment = md.PowerExperiment(
    n=1000,
    eps_list=[0.001],
    mu_grid=[0.0, 2.0, 4.0, 6.0, 8.0],
    tests=["spacing", "variance"],
    reps=2000,
    seed=1,
    calibration_budget=20_000,
)
result = md.run_power_experiment(experiment)

# %%
for test in experiment.tests:
    curve = result.curve(test, 0.001)
    print(test.ljust(9), " ".join(f"{r.power:.3f}" for r in curve))

# %% [markdown]
# The ``mu2 = 0`` column is a null cell: it should sit near 0.05.
#
# The same grid as CSV, which is what ``mixdetect power`` writes.

# %%
print(md.format_csv(result))
