"""Exact second-moment ratios E[Z^2]/E[Z]^2 for balanced 2-colorings.  The
ratio settles for small c and blows up once c passes the k = 2 threshold."""
from chromlab.experiments import run_moment_sweep

sweep = run_moment_sweep(2, [4, 8, 12, 16, 20, 24], [0.2, 0.5, 1.0, 2.0])
for c in sweep.cs:
    ratios = ", ".join(f"{r:.3f}" for r in sweep.ratios(c))
    print(f"c = {c}: {ratios}   exploding={sweep.exploding[c]}")
print("ratios explode from c =", sweep.explosion_c)
