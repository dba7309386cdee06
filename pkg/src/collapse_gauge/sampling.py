"""Random test objects: Haar unitaries, effects, density matrices, states."""

from __future__ import annotations

import numpy as np

from .core import DensityMatrix, Effect, HermitianOperator, PureState
from .montecarlo import complex_gaussian, uniform_states


def haar_unitaries(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    """Stack of Haar-random unitaries via QR of complex Ginibre matrices."""
    z = complex_gaussian(rng, (count, d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=1, axis2=2)
    return q * (diag / np.abs(diag))[:, None, :]


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    return haar_unitaries(rng, 1, d)[0]


def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> HermitianOperator:
    z = complex_gaussian(rng, (d, d))
    return HermitianOperator(scale * (z + z.conj().T) / 2)


def random_effect(rng: np.random.Generator, d: int, kind: str = "spectrum") -> Effect:
    """U diag(mu) U^dagger with Haar U.

    ``kind`` picks mu: ``spectrum`` uniform in [0, 1], ``projector`` a random
    rank in 1..d-1, ``mixed`` either of the two.
    """
    if kind == "mixed":
        kind = "projector" if rng.random() < 0.5 else "spectrum"
    u = haar_unitary(rng, d)
    if kind == "projector":
        rank = int(rng.integers(1, d))
        mu = (np.arange(d) < rank).astype(float)
    else:
        mu = rng.random(d)
    return Effect((u * mu) @ u.conj().T)


def random_density(rng: np.random.Generator, d: int, rank: int | None = None) -> DensityMatrix:
    rank = d if rank is None else rank
    g = complex_gaussian(rng, (d, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_state(rng: np.random.Generator, d: int) -> PureState:
    return PureState(uniform_states(rng, 1, d)[0])
