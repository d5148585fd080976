"""
Density sweeps and variety probes
=================================

Sweeps sample (E, F) at |E||F| ~ K q^d and record how much of F_q the dot
products cover.  Probes do the same for E inside a chosen variety that
avoids the origin.  Both are seeded and return plain rows ready for CSV.
"""

# %%
from ffdot import geometry as geo
from ffdot.harness import ExperimentConfig, SWEEP_FIELDS, rows_to_csv, run_probe, run_sweep

cfg = ExperimentConfig(qs=(7, 11), ds=(3,), ks=(0.5, 2.0, 8.0), trials=10, seed=1,
                       families=("paraboloid", "uniform-random"))
print(rows_to_csv(run_sweep(cfg), SWEEP_FIELDS))

# %%
# The same densities with E on a sphere.
cfg = ExperimentConfig(qs=(7, 11), ds=(3,), ks=(0.5, 2.0, 8.0), trials=10, seed=1,
                       families=("sphere", "uniform-random"), pinned=True)
for row in run_sweep(cfg):
    print(row["q"], row["K_actual"], row["min_pi_over_q"], row["min_fourier_over_q"], row["pinned_fraction"])

# %%
# A translated paraboloid that misses the origin.
V = geo.paraboloid(7, 3).translate((0, 0, 1))
for row in run_probe(V, ks=(1.0, 4.0), trials=10):
    print(row)
