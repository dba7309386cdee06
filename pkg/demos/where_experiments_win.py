"""
How much of state space does an experiment win on?
===================================================

Fix E and p and ask for the fraction Lambda_p(E) of unit vectors psi on which
E beats blind guessing. It is the measure of the set where a quadratic form
is positive, computed exactly from the form's spectrum.
"""

import numpy as np

from collapse_gauge import CollapseParams, chernoff_bound, conjecture_bound, good_p_threshold, lambda_p
from collapse_gauge.montecarlo import estimate_lambda
from collapse_gauge.search import uniform_projector_effect

#%%
# The projector onto the uniform superposition, across p and d.
grid = np.round(np.arange(0.05, 0.951, 0.05), 2)
print("  p    " + "  ".join(f"d={d:<4d}" for d in (2, 3, 5, 10)) + "  4p(1-p)")
for p in grid:
    row = [lambda_p(uniform_projector_effect(d), CollapseParams(p, d)).value for d in (2, 3, 5, 10)]
    print(f"{p:4.2f}  " + "  ".join(f"{v:.4f}" for v in row) + f"  {chernoff_bound(p):.4f}")

#%%
# Exact value vs Monte Carlo on the sphere.
e = uniform_projector_effect(4)
par = CollapseParams(0.45, 4)
est = estimate_lambda(e, par, n=1_000_000, seed=3)
print(f"\nd=4, p=0.45: exact {lambda_p(e, par).value:.5f}, sampled {est.mean:.5f} +- {est.std_error:.5f}")

#%%
# In d = 2 no experiment wins on more than half the sphere. From d = 3 on the
# uniform projector does, once p passes a threshold that tends to ln2/(1+ln2).
for d in (3, 4, 10, 100, 10_000):
    print(f"d={d:<6d} threshold {good_p_threshold(d):.5f}   value at p=1/2 {conjecture_bound(d):.5f}")
print(f"limit    threshold {np.log(2) / (1 + np.log(2)):.5f}   value at p=1/2 {1 - np.exp(-1):.5f}")
