"""Sample a G(n, m) multigraph, count its loops and repeated edges, and
compare with G(n, p) at the same mean degree."""
import numpy as np

from chromlab.graphs import blemishes, derive_seed, sample_gnm, sample_gnp, simplify

n, c = 2000, 2.0
m = int(c * n)
qs = []
for i in range(50):
    g = sample_gnm(n, m, derive_seed(1, i))
    b = blemishes(g)
    qs.append(b["loops"] + b["repeats"])
print(f"G({n}, {m}): mean loops + repeats over 50 samples = {np.mean(qs):.2f}")

simple, dropped = simplify(sample_gnm(n, m, 7))
gnp = sample_gnp(n, 2 * c / n, 7)
print(f"after simplification {simple.m} edges ({dropped} dropped); G(n, p) gave {gnp.m}")
