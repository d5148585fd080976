"""
Lower bounds for the dot product set
====================================

For a pair (E, F) we compare the exact |Pi(E, F)| with

* the Cauchy-Schwarz bound |E|^2|F|^2 / sum_t nu(t)^2 (exact rational), and
* the Fourier form, which replaces sum nu^2 by |E|^2|F|^2/q + q^(2d-1)|E| B(E, F).

Then we extract E0, one point per line, and see that it keeps most of Pi.
"""

# %%
import numpy as np

import ffdot as fd
from ffdot.harness import analyze

q, d = 11, 3
rng = np.random.default_rng(3)
S = fd.construct_variety(fd.sphere(q, d, 2))
E = fd.PointSet(q, d, S.members & (rng.random(q**d) < 0.5))
F = fd.PointSet(q, d, rng.random(q**d) < 0.05)

rep = analyze(E, F)
print(f"|E|={rep.size_E} |F|={rep.size_F} |Pi|={rep.pi_size}")
print(f"Cauchy-Schwarz bound {rep.cs_num}/{rep.cs_den} = {rep.cs_bound:.3f}")
print(f"Fourier bound {rep.fourier_bound:.3f}  (B = {rep.energy_B:.3e})")

# %%
# Because E sits on a sphere (<= 2 points per line), the Fourier bound is at
# least qK/(K+2) with K = |E||F|/q^d.
K = rep.size_E * rep.size_F / q**d
print(f"K = {K:.3f}, closed form qK/(K+2) = {q * K / (K + 2):.3f}")

# %%
E0 = fd.extract_E0(E)
print(f"|E0| = {E0.size} (lines hit: {rep.lines_hit_E}), |Pi(E0, F)| = {len(fd.dot_product_set(E0, F))}")

# %%
# Distances on spheres are an affine image of dot products.
F2 = fd.PointSet(q, d, fd.construct_variety(fd.sphere(q, d, 5)).members & (rng.random(q**d) < 0.3))
print("|D| =", len(fd.distance_set(E, F2)), " |Pi| =", len(fd.dot_product_set(E, F2)))
