"""
When can an experiment tell that a collapse happened?
=====================================================

A state psi either stays put (probability 1 - p) or collapses onto a basis
vector. A yes-no experiment E then guesses which of the two happened. The
baseline is blind guessing, right with probability max(p, 1 - p).
"""

import numpy as np

from collapse_gauge import (
    CollapseParams,
    DensityMatrix,
    PureState,
    blind_guess_reliability,
    collapse_hypotheses,
    helstrom_optimal,
    reliability_pure,
)
from collapse_gauge.montecarlo import estimate_reliability

d = 3
psi = PureState.normalized(np.ones(d))
par = CollapseParams(0.3, d)

# the projector onto psi itself answers "yes" when nothing happened,
# so its complement is the natural detector
proj = np.outer(psi.amplitudes, psi.amplitudes.conj())
detector = np.eye(d) - proj

#%%
# Closed-form reliability against a simulation of the actual process.
exact = reliability_pure(psi, par, detector)
sim = estimate_reliability(psi, par, detector, n=400_000, seed=1)
print(f"reliability of I - |psi><psi| at p={par.p}: {exact:.5f}")
print(f"simulated:                            {sim.mean:.5f} +- {sim.std_error:.5f}")
print(f"blind guessing:                       {blind_guess_reliability(par.p):.5f}")

#%%
# The best possible experiment for this psi is the Helstrom measurement.
# Past p = d/(d+1) even that one cannot beat blind guessing.
rho = DensityMatrix.pure(psi)
print("\n   p    best R   blind")
for p in (0.1, 0.3, 0.5, 0.7, d / (d + 1), 0.9):
    _, r_max = helstrom_optimal(*collapse_hypotheses(rho), p)
    print(f"{p:5.3f}  {r_max:.5f}  {max(p, 1 - p):.5f}")
