"""Exact chromatic numbers of sparse random graphs, set against the
predicted band."""
from collections import Counter

from chromlab import chromatic_number, predicted_band
from chromlab.graphs import derive_seed, sample_gnp

n = 200
for d in (2.0, 4.0, 6.0):
    chis = Counter(chromatic_number(sample_gnp(n, d / n, derive_seed(3, i))) for i in range(20))
    print(f"d = {d}: observed {dict(sorted(chis.items()))}, predicted {predicted_band(d).values}")
