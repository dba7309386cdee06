"""Search over effects for large Lambda_p(E), probing the conjectured ceiling.

Strategies
----------
uniform_projector
    The two-parameter family a P + b (I - P), P the projector onto the uniform
    superposition, with (a, b) drawn uniformly from [0, 1]^2.
rank_k_projectors
    V V^dagger with V the first k columns of a Haar unitary, k cycling 1..d-1.
spectrum_parametrized
    U diag(mu) U^dagger with mu uniform in [0, 1]^d and U Haar.
random_restart_local
    Coordinate hill climbing on (mu, U). A step either moves one mu_j or
    applies a Givens rotation to U. The step size halves after 50 straight
    non-improving proposals and only strict improvements are kept. Restarts
    alternate between random projectors and random interior effects.

Every strategy evaluates the uniform projector first. Candidates come from
fixed-size batches, batch ``b`` drawn from substream ``b`` of the seed, so a
larger budget only appends candidates and never changes earlier ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import CollapseParams, Effect, ValidationError
from .measure import conjecture_bound, lambda_p, positive_measure_batch
from .montecarlo import stream
from .sampling import haar_unitaries

BATCH = 1024
TIE_TOL = 1e-12
CONJECTURE_SLACK = 1e-7
STALL_STEPS = 50
MIN_STEP = 1e-7


class Strategy(str, enum.Enum):
    UNIFORM_PROJECTOR = "uniform_projector"
    RANK_K_PROJECTORS = "rank_k_projectors"
    SPECTRUM_PARAMETRIZED = "spectrum_parametrized"
    RANDOM_RESTART_LOCAL = "random_restart_local"


@dataclass(frozen=True)
class SearchReport:
    best_effect: Effect
    best_lambda: float
    p: float
    d: int
    evaluations: int
    strategy: Strategy
    violated_conjecture: bool = field(init=False)

    def __post_init__(self):
        check = lambda_p(self.best_effect, CollapseParams(self.p, self.d)).value
        if abs(check - self.best_lambda) > 1e-9:
            raise ArithmeticError(f"reported {self.best_lambda!r} but re-evaluation gives {check!r}")
        object.__setattr__(self, "violated_conjecture", self.best_lambda > conjecture_bound(self.d) + CONJECTURE_SLACK)

    def to_dict(self) -> dict:
        from .io import operator_to_json

        return {
            "best_lambda": self.best_lambda,
            "p": self.p,
            "d": self.d,
            "evaluations": self.evaluations,
            "strategy": self.strategy.value,
            "violated_conjecture": self.violated_conjecture,
            "conjecture_bound": conjecture_bound(self.d),
            "best_effect": operator_to_json(self.best_effect),
        }


def uniform_vector(d: int) -> np.ndarray:
    return np.full(d, 1.0 / np.sqrt(d), dtype=complex)


def uniform_projector_effect(d: int) -> Effect:
    """Projector onto the equal-weight superposition of the collapse basis."""
    if d < 2:
        raise ValidationError("d must be at least 2")
    phi = uniform_vector(d)
    return Effect(np.outer(phi, phi.conj()))


def indicator_batch(effects: np.ndarray, p: float) -> np.ndarray:
    """A_p(E) for a stack of effect matrices."""
    d = effects.shape[-1]
    if p <= 0.5:
        diag = np.einsum("nii->ni", effects)
        out = -(1.0 - p) * effects
        out[:, np.arange(d), np.arange(d)] += p * diag
        return out
    f = np.eye(d) - effects
    diag = np.einsum("nii->ni", f)
    out = (1.0 - p) * f
    out[:, np.arange(d), np.arange(d)] -= p * diag
    return out


def lambda_batch(effects: np.ndarray, p: float) -> np.ndarray:
    """Lambda_p for a stack of effects, with the same zero snapping as ``lambda_p``."""
    a = indicator_batch(effects, p)
    w = np.linalg.eigvalsh(a)
    scale = np.max(np.abs(w), axis=1, keepdims=True)
    w = np.where(np.abs(w) <= 1e-10 * scale, 0.0, w)
    return positive_measure_batch(w)


def _uniform_family(rng, count, d):
    phi = uniform_vector(d)
    proj = np.outer(phi, phi.conj())
    ab = rng.random((count, 2))
    return ab[:, 0, None, None] * proj + ab[:, 1, None, None] * (np.eye(d) - proj)


def _rank_k_projectors(rng, count, d, start_index):
    u = haar_unitaries(rng, count, d)
    ks = 1 + (np.arange(start_index, start_index + count) % (d - 1))
    mask = (np.arange(d)[None, :] < ks[:, None]).astype(float)
    return np.einsum("nij,nj,nkj->nik", u, mask, u.conj())


def _spectrum_effects(rng, count, d):
    u = haar_unitaries(rng, count, d)
    mu = rng.random((count, d))
    return np.einsum("nij,nj,nkj->nik", u, mu, u.conj())


def _batch_search(d, p, budget, strategy, seed):
    best_val = float(lambda_batch(uniform_projector_effect(d).matrix[None], p)[0])
    best_mat = uniform_projector_effect(d).matrix
    evaluations = 1
    b = 0
    while evaluations < budget:
        rng = stream(seed, b)
        take = min(BATCH, budget - evaluations)
        if strategy is Strategy.UNIFORM_PROJECTOR:
            cands = _uniform_family(rng, BATCH, d)
        elif strategy is Strategy.RANK_K_PROJECTORS:
            cands = _rank_k_projectors(rng, BATCH, d, b * BATCH)
        else:
            cands = _spectrum_effects(rng, BATCH, d)
        cands = cands[:take]
        vals = lambda_batch(cands, p)
        i = int(np.argmax(vals))
        if vals[i] > best_val + TIE_TOL:
            best_val, best_mat = float(vals[i]), cands[i]
        evaluations += take
        b += 1
    return best_mat, best_val, evaluations


def _givens(d, j, l, theta, imaginary):
    g = np.eye(d, dtype=complex)
    c, s = np.cos(theta), np.sin(theta)
    if imaginary:
        g[j, j], g[j, l], g[l, j], g[l, l] = c, 1j * s, 1j * s, c
    else:
        g[j, j], g[j, l], g[l, j], g[l, l] = c, s, -s, c
    return g


def _effect_of(mu, u):
    return (u * mu) @ u.conj().T


def _local_search(d, p, budget, seed):
    rng = stream(seed, 0)
    pairs = [(j, l) for j in range(d) for l in range(j + 1, d)]
    n_coords = d + 2 * len(pairs)
    # a unitary whose first column is the uniform vector
    dft = np.exp(2j * np.pi * np.outer(np.arange(d), np.arange(d)) / d) / np.sqrt(d)
    mu = np.zeros(d)
    mu[0] = 1.0
    u = dft
    cur = float(lambda_batch(_effect_of(mu, u)[None], p)[0])
    best_val, best_mat = cur, _effect_of(mu, u)
    evaluations, restart = 1, 0
    step, stall = 0.25, 0
    while evaluations < budget:
        if step < MIN_STEP:
            restart += 1
            u = haar_unitaries(rng, 1, d)[0]
            if restart % 2:
                mu = (np.arange(d) < 1 + restart // 2 % (d - 1)).astype(float)
            else:
                mu = rng.random(d)
            cur = float(lambda_batch(_effect_of(mu, u)[None], p)[0])
            evaluations += 1
            step, stall = 0.25, 0
            if cur > best_val + TIE_TOL:
                best_val, best_mat = cur, _effect_of(mu, u)
            continue
        coord = int(rng.integers(n_coords))
        sign = 1.0 if rng.random() < 0.5 else -1.0
        new_mu, new_u = mu, u
        if coord < d:
            new_mu = mu.copy()
            new_mu[coord] = min(1.0, max(0.0, mu[coord] + sign * step))
        else:
            c = coord - d
            j, l = pairs[c // 2]
            new_u = _givens(d, j, l, sign * step, c % 2 == 1) @ u
        val = float(lambda_batch(_effect_of(new_mu, new_u)[None], p)[0])
        evaluations += 1
        if val > cur:
            mu, u, cur, stall = new_mu, new_u, val, 0
            if cur > best_val + TIE_TOL:
                best_val, best_mat = cur, _effect_of(mu, u)
        else:
            stall += 1
            if stall >= STALL_STEPS:
                step *= 0.5
                stall = 0
    return best_mat, best_val, evaluations


def maximize_lambda(d: int, p: float, budget: int, strategy="random_restart_local", seed: int = 0) -> SearchReport:
    """Best Lambda_p(E) found within ``budget`` evaluations."""
    try:
        strategy = Strategy(strategy)
    except ValueError:
        raise ValidationError(f"unknown strategy {strategy!r}") from None
    CollapseParams(p, d)
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p={p} must lie strictly between 0 and 1")
    if budget < 1:
        raise ValidationError("budget must be at least 1")
    if strategy is Strategy.RANDOM_RESTART_LOCAL:
        mat, val, n = _local_search(d, p, budget, seed)
    else:
        mat, val, n = _batch_search(d, p, budget, strategy, seed)
    effect = Effect(mat)
    # report the scalar-path value so the report is self-consistent
    val = lambda_p(effect, CollapseParams(p, d)).value
    return SearchReport(effect, val, p, d, n, strategy)


def p_sweep(E, p_grid) -> list[tuple[float, float]]:
    """(p, Lambda_p(E)) along an ascending grid inside (0, 1)."""
    grid = [float(x) for x in p_grid]
    if any(not 0.0 < x < 1.0 for x in grid):
        raise ValidationError("grid values must lie strictly between 0 and 1")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError("grid must be sorted ascending")
    effect = E if isinstance(E, Effect) else Effect(E)
    return [(x, lambda_p(effect, CollapseParams(x, effect.d)).value) for x in grid]


def is_unimodal(sweep, peak: float = 0.5, slack: float = 1e-9) -> bool:
    """Non-decreasing up to ``peak`` and non-increasing after it."""
    for (p0, v0), (p1, v1) in zip(sweep, sweep[1:]):
        if p1 <= peak and v1 < v0 - slack:
            return False
        if p0 >= peak and v1 > v0 + slack:
            return False
    return True
