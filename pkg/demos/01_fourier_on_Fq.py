"""
Characters and Fourier transforms on F_q^d
==========================================

The transform of a set E is E^(m) = q^-d sum_{x in E} psi(-x.m), with
psi(u) = exp(2 pi i u / q).  Below we look at a sphere, check Plancherel,
and measure how "Salem-like" a few sets are.
"""

# %%
import numpy as np

import ffdot as fd

f = fd.make_field(7)
print("psi(1) over F_7 =", fd.character(f, 1))
print("sum of all characters:", abs(f.roots.sum()))

# %%
# The unit sphere in F_7^3 and its spectrum.
S = fd.construct_variety(fd.sphere(7, 3, 1))
spec = fd.dft(S)
print(f"|S_1| = {S.size}, E^(0) = {spec.values[0].real:.6f} = |S|/q^d = {S.size / 7**3:.6f}")
print("Plancherel defect:", fd.plancherel_defect(spec, S.size))

# %%
# Salem level s(E) = max_{m != 0} |E^(m)| q^d / sqrt(|E|).
# Spheres are close to Salem sets; random sets of the same size too;
# a coordinate subspace is as far from Salem as it gets.
rng = np.random.default_rng(0)
rand = fd.PointSet(7, 3, rng.random(343) < S.size / 343)
plane = fd.PointSet.from_points(7, 3, [(a, b, 0) for a in range(7) for b in range(7)])
for name, E in [("sphere", S), ("random", rand), ("plane x3=0", plane)]:
    print(f"{name:12s} |E|={E.size:4d}  salem={fd.salem_constant(E):7.3f}")
