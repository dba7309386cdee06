"""Majorization inequalities and spectral bounds for the indicator operator A_p(E).

Every ``*_check`` function tests an inequality that is a theorem for
admissible inputs. A ``False`` return therefore points at a bug or at an
input that is not actually admissible, and the checks double as self-tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    CollapseParams,
    DimensionMismatch,
    ValidationError,
    as_matrix,
    collapse_indicator_operator,
)

ABS_TOL = 1e-10


def _tol(d: int, *mats) -> float:
    if d <= 16:
        return ABS_TOL
    norm = max(float(np.linalg.norm(m, 2)) for m in mats)
    return ABS_TOL * max(1.0, norm)


def eigenvalues_desc(op) -> np.ndarray:
    m = as_matrix(op)
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))[::-1]


@dataclass(frozen=True)
class SpectralBounds:
    lambda_max_bound: float
    lambda_min_bound: float
    alpha_sum_bound: float
    beta_sum_bound: float

    def __post_init__(self):
        if self.lambda_min_bound > self.lambda_max_bound:
            raise ValidationError("lower eigenvalue bound exceeds upper bound")
        if not self.beta_sum_bound <= 0.0 <= self.alpha_sum_bound:
            raise ValidationError("sum bounds must straddle zero")


def ky_fan_check(B, C, m: int) -> bool:
    """Sum of the m largest eigenvalues is subadditive: top_m(B + C) <= top_m(B) + top_m(C)."""
    b, c = as_matrix(B), as_matrix(C)
    if b.shape != c.shape:
        raise DimensionMismatch(f"shapes {b.shape} and {c.shape} differ")
    d = b.shape[0]
    if not 1 <= m <= d:
        raise ValidationError(f"m={m} outside 1..{d}")
    lhs = eigenvalues_desc(b + c)[:m].sum()
    rhs = eigenvalues_desc(b)[:m].sum() + eigenvalues_desc(c)[:m].sum()
    return bool(lhs <= rhs + _tol(d, b, c))


def schur_horn_check(E, m: int) -> bool:
    """Diagonal of E is majorized by its spectrum, and both sit inside [0, 1]."""
    e = as_matrix(E)
    d = e.shape[0]
    if not 1 <= m <= d:
        raise ValidationError(f"m={m} outside 1..{d}")
    tol = _tol(d, e)
    mu = eigenvalues_desc(e)
    diag = np.sort(np.diag(e).real)[::-1]
    majorized = diag[:m].sum() <= mu[:m].sum() + tol
    sandwich = (
        -tol <= mu[-1]
        and mu[-1] <= diag[-1] + tol
        and diag[-1] <= diag[0] + tol
        and diag[0] <= mu[0] + tol
        and mu[0] <= 1.0 + tol
    )
    return bool(majorized and sandwich)


def partial_sum_bound(E, params: CollapseParams, m: int) -> float:
    """Ky Fan bound on the sum of the m largest eigenvalues of A_p(E).

    p <= 1/2:  p * sum_{i<=m} d_i - (1-p) * sum of the m smallest mu_i
    p >  1/2:  (1-p) * sum of (1 - mu_i) over the m smallest mu_i - p * sum_{i<=m} (1 - d_i)

    with mu the eigenvalues and d the diagonal entries of E, both descending.
    """
    e = as_matrix(E)
    d = e.shape[0]
    if not 1 <= m <= d:
        raise ValidationError(f"m={m} outside 1..{d}")
    p = params.p
    mu = eigenvalues_desc(e)
    diag = np.sort(np.diag(e).real)[::-1]
    if p <= 0.5:
        return float(p * diag[:m].sum() - (1.0 - p) * mu[d - m:].sum())
    return float((1.0 - p) * (1.0 - mu[d - m:]).sum() - p * (1.0 - diag[:m]).sum())


def partial_sum_check(E, params: CollapseParams, m: int) -> bool:
    a = collapse_indicator_operator(E, params).matrix
    top = eigenvalues_desc(a)[:m].sum()
    return bool(top <= partial_sum_bound(E, params, m) + _tol(a.shape[0], a))


def signed_sums(op) -> tuple[float, float]:
    """(sum of positive eigenvalues, sum of negative eigenvalues)."""
    w = eigenvalues_desc(op)
    return float(w[w > 0].sum()), float(w[w < 0].sum())


def indicator_spectral_bounds(E, params: CollapseParams) -> SpectralBounds:
    """Bounds on the extreme eigenvalues of A_p(E) and on its signed eigenvalue sums."""
    if not 0.0 < params.p < 1.0:
        raise ValidationError(f"p={params.p} must lie strictly between 0 and 1")
    p = params.p
    tr_e = float(np.trace(as_matrix(E)).real)
    if p <= 0.5:
        cap = min(1.0, tr_e)
        return SpectralBounds(cap * p, -cap * (1.0 - p), p * tr_e, -(1.0 - p) * tr_e)
    tr_f = params.d - tr_e
    cap = min(1.0, tr_f)
    return SpectralBounds(cap * (1.0 - p), -cap * p, (1.0 - p) * tr_f, -p * tr_f)


def spectral_bounds_check(E, params: CollapseParams) -> bool:
    """Actual spectrum of A_p(E) lies within :func:`indicator_spectral_bounds`."""
    a = collapse_indicator_operator(E, params).matrix
    b = indicator_spectral_bounds(E, params)
    tol = _tol(a.shape[0], a)
    w = eigenvalues_desc(a)
    alpha, beta = signed_sums(a)
    return bool(
        w[0] <= b.lambda_max_bound + tol
        and w[-1] >= b.lambda_min_bound - tol
        and alpha <= b.alpha_sum_bound + tol
        and beta >= b.beta_sum_bound - tol
    )


def trace_normalized_bounds(E, params: CollapseParams) -> tuple[float, float]:
    """(lower bound on the negative-eigenvalue sum, upper bound on the positive one), via tr A_p(E)."""
    p = params.p
    if p == 0.5:
        raise ValidationError("bounds divide by 1 - 2p and are undefined at p = 1/2")
    tr_a = collapse_indicator_operator(E, params).trace()
    if p < 0.5:
        return (1.0 - p) / (1.0 - 2.0 * p) * tr_a, -p / (1.0 - 2.0 * p) * tr_a
    return p / (2.0 * p - 1.0) * tr_a, -(1.0 - p) / (2.0 * p - 1.0) * tr_a


def trace_normalized_check(E, params: CollapseParams) -> bool:
    a = collapse_indicator_operator(E, params).matrix
    lo, hi = trace_normalized_bounds(E, params)
    alpha, beta = signed_sums(a)
    tol = _tol(a.shape[0], a)
    return bool(lo - tol <= beta <= tol and -tol <= alpha <= hi + tol)
