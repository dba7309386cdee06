"""Exact spherical measure of {psi : <psi|A|psi> > 0} and the analytic bounds on it.

For a Hermitian A with positive eigenvalues a_1 > ... > a_k and non-positive
eigenvalues b_1 >= ... >= b_m the measure is

    sum_i a_i^(d-1) / (prod_h (a_i - b_h) * prod_{j != i} (a_i - a_j))

The terms alternate in sign and blow up as positive eigenvalues approach each
other, so values are computed with a knot recursion that forms only convex
combinations (:func:`positive_measure_batch`). The literal sum is kept in
:func:`formula_sum` for cross-checking.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CollapseParams,
    SignedSpectrum,
    ValidationError,
    as_matrix,
    collapse_indicator_operator,
)

GAP_TOL = 1e-7
CLAMP_TOL = 1e-8
PERTURBATION = 1e-6

LN2 = math.log(2.0)


class Method(str, enum.Enum):
    EXACT = "exact"
    COMPLEMENTED = "complemented"
    PERTURBED = "perturbed"


@dataclass(frozen=True)
class LambdaResult:
    value: float
    method: Method = Method.EXACT
    perturbation_applied: float = 0.0

    def __float__(self):
        return self.value


def _relative_gaps(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return np.array([np.inf])
    return (v[:-1] - v[1:]) / np.abs(v[:-1])


def _distinct(values, gap_tol: float = GAP_TOL) -> bool:
    return bool(np.all(_relative_gaps(values) > gap_tol))


def formula_sum(alphas, betas, d: int | None = None) -> float:
    """Literal alternating sum over the positive eigenvalues.

    Needs mutually distinct ``alphas``. Each term is formed in log space and
    the terms are added with ``math.fsum``; the result still loses digits when
    the alphas are close or spread over many orders of magnitude, so this is
    kept as an independent cross-check of :func:`positive_measure`.
    """
    alphas = sorted((float(a) for a in alphas), reverse=True)
    betas = [float(b) for b in betas]
    if d is None:
        d = len(alphas) + len(betas)
    if not alphas:
        return 0.0
    if not _distinct(alphas, 0.0):
        raise ValidationError("formula needs distinct positive eigenvalues")
    logs, signs = [], []
    for i, a in enumerate(alphas):
        log_term = (d - 1) * math.log(a)
        log_term -= sum(math.log(a - b) for b in betas)
        log_term -= sum(math.log(abs(a - aj)) for j, aj in enumerate(alphas) if j != i)
        logs.append(log_term)
        # alphas are descending: a_i - a_j < 0 exactly for the i earlier nodes
        signs.append(-1.0 if i % 2 else 1.0)
    shift = max(logs)
    total = math.fsum(s * math.exp(lt - shift) for s, lt in zip(signs, logs))
    return total * math.exp(shift)


def positive_measure_batch(eigenvalues) -> np.ndarray:
    """Measure of {psi : <psi|A|psi> > 0} for each row of eigenvalues.

    Uses the knot recursion

        G(t_i..t_j) = (t_j G(t_{i+1}..t_j) - t_i G(t_i..t_{j-1})) / (t_j - t_i)

    over the ascending eigenvalues, with G = 1 when every knot is positive and
    G = 0 when none is. Whenever t_i <= 0 < t_j the two weights are in [0, 1]
    and sum to one, so nothing cancels and repeated eigenvalues need no special
    treatment. Zero eigenvalues count as non-positive.
    """
    t = np.sort(np.atleast_2d(np.asarray(eigenvalues, dtype=float)), axis=1)
    n = t.shape[1]
    g = (t > 0).astype(float)
    for length in range(2, n + 1):
        lo, hi = t[:, : n - length + 1], t[:, length - 1 :]
        mixed = (lo <= 0) & (hi > 0)
        span = np.where(mixed, hi - lo, 1.0)
        inner = (hi * g[:, 1:] - lo * g[:, :-1]) / span
        g = np.where(lo > 0, 1.0, np.where(hi <= 0, 0.0, inner))
    return g[:, 0]


def positive_measure(alphas, betas) -> float:
    """Scalar form of :func:`positive_measure_batch` for a split spectrum."""
    return float(positive_measure_batch([list(alphas) + list(betas)])[0])


def _spread_clusters(values, gap_tol: float, delta: float) -> tuple[list, float]:
    """Spread runs of near-equal values symmetrically by relative steps of ``delta``."""
    out, applied = [], 0.0
    vals = list(values)
    i = 0
    while i < len(vals):
        j = i + 1
        while j < len(vals) and (vals[j - 1] - vals[j]) / abs(vals[j - 1]) <= gap_tol:
            j += 1
        r = j - i
        if r == 1:
            out.append(vals[i])
        else:
            centre = math.fsum(vals[i:j]) / r
            for t in range(r):
                off = ((r - 1) / 2.0 - t) * delta
                out.append(centre * (1.0 + off))
                applied = max(applied, abs(off))
        i = j
    return out, applied


def _finish(value: float, method: Method, applied: float = 0.0) -> LambdaResult:
    if value < -CLAMP_TOL or value > 1.0 + CLAMP_TOL:
        raise ArithmeticError(f"measure evaluated to {value!r}, outside [0, 1] beyond round-off")
    return LambdaResult(min(1.0, max(0.0, value)), method, applied)


def measure_positive_form(spec: SignedSpectrum, d: int | None = None) -> LambdaResult:
    """Uniform measure of the unit vectors on which the quadratic form is positive.

    ``method`` records which case applies: ``exact`` for distinct positive
    eigenvalues; ``complemented`` when only the negative ones are distinct,
    in which case the value is one minus the measure for -A; ``perturbed``
    when both sides are degenerate. In the last case the positive clusters
    are spread by relative offsets of 1e-6 first. The recursion behind
    :func:`positive_measure` is itself continuous in repeated eigenvalues, so
    all three routes agree to round-off.
    """
    k, m = spec.k, spec.m
    if k + m == 0:
        raise ValidationError("empty spectrum")
    if d is not None and k + m != d:
        raise ValidationError(f"spectrum has {k + m} eigenvalues, expected {d}")
    if k == 0:
        return LambdaResult(0.0)
    if m == 0:
        return LambdaResult(1.0)
    if _distinct(spec.alphas):
        return _finish(positive_measure(spec.alphas, spec.betas), Method.EXACT)
    neg = spec.negated()
    if _distinct(neg.alphas):
        return _finish(1.0 - positive_measure(neg.alphas, neg.betas), Method.COMPLEMENTED)
    alphas, applied = _spread_clusters(spec.alphas, GAP_TOL, PERTURBATION)
    return _finish(positive_measure(alphas, spec.betas), Method.PERTURBED, applied)


def lambda_p(E, params: CollapseParams) -> LambdaResult:
    """Measure of the states on which E beats blind guessing."""
    if not 0.0 < params.p < 1.0:
        raise ValidationError(f"p={params.p} must lie strictly between 0 and 1")
    a = collapse_indicator_operator(E, params)
    return measure_positive_form(SignedSpectrum.from_operator(a), params.d)


def markov_bound(E, params: CollapseParams) -> float:
    p, d = params.p, params.d
    tr_e = float(np.trace(as_matrix(E)).real)
    return ((1.0 - p) + (2.0 * p - 1.0) * tr_e / d) / ((1.0 - p) + max(0.0, 2.0 * p - 1.0))


def _p_of(params) -> float:
    return params.p if isinstance(params, CollapseParams) else float(params)


def chernoff_bound(params) -> float:
    """4p(1-p), valid in every dimension. Accepts CollapseParams or a bare p."""
    p = _p_of(params)
    return 4.0 * p * (1.0 - p)


def conjecture_bound(d: int) -> float:
    if d < 2:
        raise ValidationError("d must be at least 2")
    return -math.expm1((d - 1) * math.log1p(-1.0 / d))


def uniform_projector_measure(d: int, p: float) -> float:
    """Closed-form measure for the projector onto the uniform superposition, p <= 1/2."""
    if not 0.0 < p <= 0.5:
        raise ValidationError("closed form holds for 0 < p <= 1/2")
    return -math.expm1((d - 1) * math.log1p(-p / (d * (1.0 - p))))


def good_p_threshold(d: int) -> float:
    """p above which the uniform-superposition projector beats blind guessing on > 1/2 of the sphere."""
    if d < 3:
        raise ValidationError("threshold is defined for d >= 3")
    c = -math.expm1(-LN2 / (d - 1))
    return 1.0 - 1.0 / (1.0 + d * c)


def single_negative_regime(p: float) -> bool:
    """True where one-negative-eigenvalue effects are guaranteed to have measure <= 1/2."""
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p={p} must lie strictly between 0 and 1")
    return p < LN2 / (1.0 + LN2) or p > 1.0 / (1.0 + LN2)
