"""
Is the uniform projector the best experiment?
=============================================

At p = 1/2 the uniform projector wins on 1 - (1 - 1/d)^(d-1) of the sphere.
Nothing better is known. Here we let each search strategy look for one.
"""

import time

from collapse_gauge import conjecture_bound, maximize_lambda
from collapse_gauge.search import Strategy

budget = 20_000
for d in (3, 4, 5):
    print(f"d={d}, conjectured maximum {conjecture_bound(d):.8f}")
    for s in Strategy:
        t0 = time.perf_counter()
        rep = maximize_lambda(d, 0.5, budget, s, seed=0)
        note = "  exceeds the conjecture!" if rep.violated_conjecture else ""
        print(f"  {s.value:22s} best {rep.best_lambda:.8f}  ({time.perf_counter() - t0:.1f}s){note}")

#%%
# Away from p = 1/2 the best value drops, as the Chernoff bound demands.
for p in (0.2, 0.35, 0.5, 0.65, 0.8):
    rep = maximize_lambda(4, p, 5_000, "spectrum_parametrized", seed=1)
    print(f"d=4 p={p:.2f}: best found {rep.best_lambda:.5f}, 4p(1-p) = {4 * p * (1 - p):.5f}")
