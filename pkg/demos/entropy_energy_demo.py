"""Numerical look at the entropy-energy functional g_c on doubly stochastic
matrices: the flat matrix wins below c_(k-1), the row maximizer matches the
closed form, and the suggested counterexample matrix does not beat J_k."""
import numpy as np

from chromlab import c_k
from chromlab.entropy_energy import (
    counterexample_check,
    maximize_row,
    neveruse_report,
    s_star,
    verify_theorem7,
)

for k in (3, 4, 5):
    rep = verify_theorem7(k, c_k(k - 1), trials=20000, seed=k)
    print(f"k = {k}: best sampled g_c minus g_c(J_k) = {rep.margin:.3e}")

res = maximize_row(0.5, 4)
print("row maximizer at r = 0.5, k = 4:", np.round(np.sort(res.s)[::-1], 6),
      "closed form:", np.round(s_star(0.5, 4), 6))

for k in (3, 6, 10):
    ce = counterexample_check(k)
    print(f"k = {k}: g_c(A) - g_c(J_k) at c = u_k - 1 is {ce.gap:.4f}; "
          f"A overtakes J_k only at c = {ce.breakeven_c:.4f}")

rep = neveruse_report(3)
print("three-term minimum for k = 3:", rep.closed_form)
