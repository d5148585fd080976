"""
Lines through the origin
========================

Everything downstream depends on |E cap l_x|, the number of points of E on
the punctured line l_x = {s x : s != 0}.  Spheres of nonzero radius meet
every such line at most twice; the paraboloid can contain whole lines; a
translate P + a with a off the conjugate paraboloid is back to two.
"""

# %%
import ffdot as fd
from ffdot.pointset import paraboloid_split

q, d = 5, 3
print(len(fd.enumerate_lines(q, d)), "lines through the origin in F_5^3")

# %%
for j in range(1, q):
    t = fd.line_table(fd.construct_variety(fd.sphere(q, d, j)))
    print(f"S_{j}: max |S cap l_x| = {t.max_count}, lines hit = {t.lines_hit}")

# %%
# The paraboloid contains isotropic lines: (1, 2, 0) has 1 + 4 = 0 mod 5.
P = fd.construct_variety(fd.paraboloid(q, d))
t = fd.line_table(P)
full = [rep for rep, c in t.as_dict().items() if c == q - 1]
print("lines fully inside P:", full)

# Splitting off the x_d = 0 part leaves at most one point per line.
G, B = paraboloid_split(P)
print("max over lines of |G cap l_x| =", fd.line_table(G).max_count, "; |B| =", B.size)

# %%
Pbar = fd.construct_variety(fd.conjugate_paraboloid(q, d))
worst = 0
for r in range(q**d):
    a = fd.unrank(r, q, d)
    if a not in Pbar:
        worst = max(worst, fd.line_table(fd.translate(P, a)).max_count)
print("worst line count over all good translates P + a:", worst)
