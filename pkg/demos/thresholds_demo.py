"""Where does the chromatic number of G(n, d/n) jump?  Print k_d and the
predicted band for a range of average degrees."""
import numpy as np

from chromlab import predicted_band, threshold_profile

for d in np.arange(0.5, 12.5, 1.0):
    band = predicted_band(float(d))
    exact = f"exactly {band.exact}" if band.exact_flag else "two values possible"
    print(f"d = {d:5.2f}  chi in {band.values}  ({exact})")

print()
for k in range(2, 8):
    p = threshold_profile(k)
    print(f"k = {k}: first moment vanishes past c = {p.c_k:.4f}, "
          f"second moment works up to u_k = {p.u_k:.4f}")
