"""Brute-force oracle: uniform sampling on the complex sphere and hypoexponential densities.

Random streams
--------------
Every estimator splits its ``n`` samples into fixed chunks of ``CHUNK``
draws. Chunk ``i`` reads from its own Philox generator seeded with
``SeedSequence(seed, spawn_key=(i,))``. Chunk counts are integers and are
added in chunk order, so the estimate depends only on ``(inputs, seed, n)``,
never on how many workers ran the chunks.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev

from .core import (
    CollapseParams,
    DimensionMismatch,
    PureState,
    ValidationError,
    as_matrix,
    collapse_branch_probabilities,
    collapse_indicator_operator,
    draw_collapse_branches,
)

CHUNK = 1 << 16
THREADS_ENV = "COLLAPSE_GAUGE_THREADS"
DISTINCT_TOL = 1e-7
EXPLICIT_MAX_N = 20


@dataclass(frozen=True)
class EstimateWithCI:
    mean: float
    std_error: float
    n: int
    seed: int

    @classmethod
    def from_count(cls, hits: int, n: int, seed: int) -> "EstimateWithCI":
        mean = hits / n
        return cls(mean, math.sqrt(mean * (1.0 - mean) / n), n, seed)

    def within(self, value: float, sigmas: float = 4.0) -> bool:
        return abs(self.mean - value) <= sigmas * self.std_error


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for substream ``index`` of ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def worker_count() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _count_chunks(count_chunk, n: int, threads: int | None = None) -> int:
    """Sum ``count_chunk(index, size)`` over the fixed chunking of n samples."""
    if n < 1:
        raise ValidationError("need at least one sample")
    sizes = [CHUNK] * (n // CHUNK)
    if n % CHUNK:
        sizes.append(n % CHUNK)
    threads = worker_count() if threads is None else threads
    if threads <= 1 or len(sizes) == 1:
        return sum(count_chunk(i, s) for i, s in enumerate(sizes))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(count_chunk, range(len(sizes)), sizes))


def complex_gaussian(rng: np.random.Generator, size) -> np.ndarray:
    """Standard complex normal: real and imaginary parts N(0, 1/2)."""
    z = rng.standard_normal(size=tuple(np.atleast_1d(size)) + (2,))
    return (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)


def uniform_states(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """n x d array of rows uniformly distributed on the unit sphere of C^d."""
    z = complex_gaussian(rng, (n, d))
    norms = np.linalg.norm(z, axis=1)
    while np.any(norms == 0):
        bad = norms == 0
        z[bad] = complex_gaussian(rng, (int(bad.sum()), d))
        norms = np.linalg.norm(z, axis=1)
    return z / norms[:, None]


def sample_uniform_state(d: int, seed: int) -> PureState:
    if d < 2:
        raise ValidationError("d must be at least 2")
    return PureState(uniform_states(stream(seed), 1, d)[0])


def quadratic_forms(states: np.ndarray, op: np.ndarray) -> np.ndarray:
    """Real values <psi|A|psi> for each row psi of ``states``."""
    return np.einsum("ni,ni->n", states.conj(), states @ op.T).real


def estimate_positive_form(A, n: int, seed: int, threads: int | None = None) -> EstimateWithCI:
    """Fraction of n uniform unit vectors with <psi|A|psi> > 0."""
    a = as_matrix(A)
    d = a.shape[0]

    def count(index, size):
        # normalizing does not change the sign, so raw Gaussians suffice
        z = complex_gaussian(stream(seed, index), (size, d))
        return int(np.count_nonzero(quadratic_forms(z, a) > 0))

    return EstimateWithCI.from_count(_count_chunks(count, n, threads), n, seed)


def estimate_lambda(E, params: CollapseParams, n: int, seed: int, threads: int | None = None) -> EstimateWithCI:
    if not 0.0 < params.p < 1.0:
        raise ValidationError(f"p={params.p} must lie strictly between 0 and 1")
    a = collapse_indicator_operator(E, params).matrix
    return estimate_positive_form(a, n, seed, threads)


def estimate_reliability(
    psi: PureState, params: CollapseParams, E, n: int, seed: int, threads: int | None = None
) -> EstimateWithCI:
    """Simulate collapse, then the yes/no experiment, and score the retrodiction.

    Each run uses one uniform for the collapse branch (same inverse-CDF
    sampler as ``simulate_collapse``) and one for the Born-rule outcome.
    A collapse onto b_k leaves psi' = phase * b_k, so <psi'|E|psi'> = E_kk.
    """
    e = as_matrix(E)
    if e.shape[0] != psi.d or psi.d != params.d:
        raise DimensionMismatch(f"state d={psi.d}, effect d={e.shape[0]}, params d={params.d}")
    v = psi.amplitudes
    weights = collapse_branch_probabilities(psi, params.p)
    yes_prob = np.concatenate(([np.real(v.conj() @ e @ v)], np.diag(e).real))

    def count(index, size):
        u = stream(seed, index).random((size, 2))
        branch = draw_collapse_branches(weights, u[:, 0])
        said_yes = u[:, 1] < yes_prob[branch]
        return int(np.count_nonzero(said_yes == (branch > 0)))

    return EstimateWithCI.from_count(_count_chunks(count, n, threads), n, seed)


def _check_distinct(lams) -> np.ndarray:
    lam = np.sort(np.asarray(lams, dtype=float))[::-1]
    if lam.size == 0 or np.any(lam <= 0):
        raise ValidationError("rates must be positive")
    if lam.size > 1 and np.any((lam[:-1] - lam[1:]) / lam[:-1] <= DISTINCT_TOL):
        raise ValidationError("weights must be mutually distinct; perturb coincident values")
    return lam


def hypoexp_density(lams, c: float) -> float:
    """Density at c of sum_i lam_i X_i with X_i i.i.d. exponential of mean 2.

    Uses the explicit partial-fraction sum for up to 20 weights and the
    quadrature recursion beyond that, where the sum cancels too badly.
    """
    lam = _check_distinct(lams)
    if c < 0:
        return 0.0
    n = lam.size
    if n > EXPLICIT_MAX_N:
        return hypoexp_density_recursive(lam, c)
    terms = []
    for i, li in enumerate(lam):
        denom = 2.0 * math.prod(li - lj for j, lj in enumerate(lam) if j != i)
        terms.append(math.exp(-c / (2.0 * li)) * li ** (n - 2) / denom)
    return max(0.0, math.fsum(terms))


def hypoexp_density_recursive(lams, c: float, degree: int = 96) -> float:
    """Same density via f_{n+1}(c) = e^{-c/2l} / (2l) * int_0^c f_n(s) e^{s/2l} ds.

    Each integral is taken exactly on a Chebyshev interpolant over [0, c].
    Works for coincident weights too.
    """
    lam = np.asarray(lams, dtype=float)
    if c <= 0:
        return (1.0 / (2.0 * lam[0])) if (lam.size == 1 and c == 0) else 0.0
    dom = [0.0, float(c)]
    l0 = lam[0]
    f = Chebyshev.interpolate(lambda s: np.exp(-s / (2 * l0)) / (2 * l0), degree, domain=dom)
    for li in lam[1:]:
        # e^{(s-c)/2l} <= 1 on the domain keeps the integrand bounded
        g = Chebyshev.interpolate(lambda s, f=f, li=li: f(s) * np.exp((s - c) / (2 * li)), degree, domain=dom)
        big_g = g.integ(lbnd=0.0)
        f = Chebyshev.interpolate(
            lambda s, li=li, big_g=big_g: np.exp((c - s) / (2 * li)) / (2 * li) * big_g(s), degree, domain=dom
        )
    return float(max(0.0, f(c)))


def exp_half_mgf(scale: float, t: float) -> float:
    """E[exp(scale * X * t)] for X exponential of mean 2, valid for 2 * scale * t < 1."""
    if 2.0 * scale * t >= 1.0:
        raise ValidationError("moment generating function diverges for 2 * scale * t >= 1")
    return 1.0 / (1.0 - 2.0 * scale * t)


def _single_sum(alphas, betas) -> float:
    # exact rational arithmetic: the partial fractions cancel heavily in floats
    a = [Fraction(x) for x in alphas]
    b = [Fraction(x) for x in betas]
    k, m = len(a), len(b)
    total = Fraction(0)
    for i, ai in enumerate(a):
        den = math.prod((ai - aj for j, aj in enumerate(a) if j != i), start=Fraction(1))
        den *= math.prod((ai - bh for bh in b), start=Fraction(1))
        total += ai ** (k + m - 1) / den
    return float(total)


def _double_sum(alphas, betas) -> float:
    a = [Fraction(x) for x in alphas]
    b = [Fraction(x) for x in betas]
    k, m = len(a), len(b)
    total = Fraction(0)
    for i, ai in enumerate(a):
        pa = math.prod((ai - aj for j, aj in enumerate(a) if j != i), start=Fraction(1))
        for h, bh in enumerate(b):
            pb = math.prod((bl - bh for l, bl in enumerate(b) if l != h), start=Fraction(1))
            total += ai**k * (-bh) ** (m - 1) / ((ai - bh) * pa * pb)
    return float(total)


def prob_positive_combination(alphas, betas, check_tol: float = 1e-9) -> float:
    """P(sum_i alpha_i A_i > sum_h (-beta_h) B_h) for i.i.d. exponential A_i, B_h.

    With distinct betas the double sum obtained by integrating the two
    hypoexponential densities is evaluated and compared with the collapsed
    single sum; a disagreement beyond ``check_tol`` raises ArithmeticError.
    Coincident betas only admit the single sum. Both sums are evaluated in
    exact rational arithmetic on the given doubles and rounded once, so the
    comparison tests the identity rather than float cancellation.
    """
    a = sorted((float(x) for x in alphas), reverse=True)
    b = sorted((float(x) for x in betas), reverse=True)
    if not a:
        return 0.0
    if any(x <= 0 for x in a) or any(x > 0 for x in b):
        raise ValidationError("alphas must be positive and betas non-positive")
    if len(a) > 1 and min((a[i] - a[i + 1]) / a[i] for i in range(len(a) - 1)) <= DISTINCT_TOL:
        raise ValidationError("alphas must be mutually distinct")
    if not b:
        return 1.0
    single = _single_sum(a, b)
    if len(b) == 1 or min(b[i] - b[i + 1] for i in range(len(b) - 1)) > DISTINCT_TOL * abs(b[-1]):
        double = _double_sum(a, b)
        if abs(double - single) > check_tol:
            raise ArithmeticError(f"double sum {double!r} disagrees with single sum {single!r}")
        return double
    return single


def lagrange_identity_sum(lams) -> float:
    """sum_i lam_i^(n-2) / prod_{j != i} (lam_i - lam_j); zero for distinct lam."""
    lam = [float(x) for x in lams]
    n = len(lam)
    return math.fsum(
        lam[i] ** (n - 2) / math.prod(lam[i] - lam[j] for j in range(n) if j != i) for i in range(n)
    )
