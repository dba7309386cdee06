import math

import numpy as np
import pytest

from collapse_gauge import spectrum
from collapse_gauge.core import CollapseParams, ValidationError, collapse_indicator_operator, indicator_trace
from collapse_gauge.sampling import random_effect, random_hermitian


def test_eigenvalues_desc():
    assert np.allclose(spectrum.eigenvalues_desc(np.diag([1.0, 3.0, 2.0])), [3, 2, 1])


def test_ky_fan_random(rng):
    for _ in range(100):
        d = int(rng.integers(2, 7))
        b, c = random_hermitian(rng, d), random_hermitian(rng, d)
        assert all(spectrum.ky_fan_check(b, c, m) for m in range(1, d + 1))


def test_ky_fan_equality_for_commuting():
    b, c = np.diag([3.0, 1.0, 0.0]), np.diag([2.0, 1.0, -1.0])
    for m in (1, 2, 3):
        assert spectrum.ky_fan_check(b, c, m)


def test_schur_horn_random(rng):
    for _ in range(100):
        d = int(rng.integers(2, 7))
        e = random_effect(rng, d, "mixed")
        assert all(spectrum.schur_horn_check(e, m) for m in range(1, d + 1))


def test_partial_sums(rng):
    for _ in range(100):
        d = int(rng.integers(2, 7))
        par = CollapseParams(float(rng.uniform(0.01, 0.99)), d)
        e = random_effect(rng, d, "mixed")
        assert all(spectrum.partial_sum_check(e, par, m) for m in range(1, d + 1))
        # at m = d the bound is the trace itself
        assert math.isclose(spectrum.partial_sum_bound(e, par, d), indicator_trace(e, par), abs_tol=1e-12)


def test_signed_sums():
    assert spectrum.signed_sums(np.diag([2.0, -1.0, 0.5, 0.0])) == (2.5, -1.0)


def test_spectral_bounds_random(rng):
    for _ in range(200):
        d = int(rng.integers(2, 7))
        par = CollapseParams(float(rng.uniform(0.01, 0.99)), d)
        assert spectrum.spectral_bounds_check(random_effect(rng, d, "mixed"), par)


def test_spectral_bounds_rank_one_tight():
    # a basis projector at p <= 1/2: A = p E - (1-p) E, single eigenvalue -(1-2p)
    e = np.diag([1.0, 0.0, 0.0])
    par = CollapseParams(0.3, 3)
    w = spectrum.eigenvalues_desc(collapse_indicator_operator(e, par))
    b = spectrum.indicator_spectral_bounds(e, par)
    assert w[-1] >= b.lambda_min_bound
    assert math.isclose(w[-1], -0.4)


def test_trace_normalized(rng):
    for _ in range(200):
        d = int(rng.integers(2, 7))
        p = float(rng.uniform(0.01, 0.99))
        if abs(p - 0.5) < 1e-3:
            continue
        assert spectrum.trace_normalized_check(random_effect(rng, d, "mixed"), CollapseParams(p, d))


def test_trace_normalized_undefined_at_half():
    with pytest.raises(ValidationError):
        spectrum.trace_normalized_bounds(np.eye(2) / 2, CollapseParams(0.5, 2))


def test_scaled_tolerance_large_d(rng):
    d = 24
    par = CollapseParams(0.4, d)
    e = random_effect(rng, d)
    assert spectrum.spectral_bounds_check(e, par)
    assert spectrum.partial_sum_check(e, par, d // 2)
