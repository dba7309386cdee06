import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collapse_gauge import core
from collapse_gauge.core import (
    CollapseParams,
    DensityMatrix,
    DimensionMismatch,
    Effect,
    HermitianOperator,
    PureState,
    SignedSpectrum,
    ValidationError,
)
from collapse_gauge.sampling import random_density, random_effect, random_state


def test_hermitian_rejects_asymmetric():
    with pytest.raises(ValidationError):
        HermitianOperator([[0, 1], [0, 0]])


def test_hermitian_symmetrizes_roundoff():
    m = np.array([[1, 1e-14j], [0, 2]])
    op = HermitianOperator(m)
    assert np.allclose(op.matrix, op.matrix.conj().T, atol=0)
    assert not op.matrix.flags.writeable


def test_effect_bounds():
    Effect(np.diag([0.0, 1.0]))
    Effect(np.diag([-1e-12, 1 + 1e-12]))
    with pytest.raises(ValidationError, match="eigenvalue"):
        Effect(np.diag([1.2, 0.0]))
    with pytest.raises(ValidationError, match="eigenvalue"):
        Effect(np.diag([0.5, -0.1]))


def test_density_trace():
    with pytest.raises(ValidationError, match="trace"):
        DensityMatrix(np.diag([0.5, 0.49]))
    rho = DensityMatrix(np.eye(3) / 3)
    assert rho.d == 3


def test_pure_state_norm():
    with pytest.raises(ValidationError):
        PureState(np.array([1.0, 1.0]))
    psi = PureState.normalized([3, 4j])
    assert math.isclose(np.linalg.norm(psi.amplitudes), 1.0)
    assert PureState.basis(3, 1).amplitudes[1] == 1


def test_params_validation():
    with pytest.raises(ValidationError):
        CollapseParams(1.5, 2)
    with pytest.raises(ValidationError):
        CollapseParams(0.5, 1)


def test_signed_spectrum_split():
    s = SignedSpectrum.from_eigenvalues([0.3, -0.2, 0.0, 1e-14, 0.7])
    assert s.alphas == (0.7, 0.3)
    assert s.m == 3 and all(b <= 0 for b in s.betas)
    assert s.negated().alphas == (0.2,)


def test_diag_part():
    m = np.array([[0.5, 0.2], [0.2, 0.5]])
    assert np.allclose(core.diag_part(m).matrix, np.diag([0.5, 0.5]))


def test_identity_effect_always_yes():
    # E = I says "collapsed" every time: right exactly when collapse happened
    psi = PureState.normalized([1, 1j, 0.5])
    for p in (0.0, 0.3, 1.0):
        assert math.isclose(core.reliability_pure(psi, CollapseParams(p, 3), np.eye(3)), p, abs_tol=1e-15)


def test_zero_effect_reliability():
    psi = PureState.normalized([1, 2])
    assert math.isclose(core.reliability_pure(psi, CollapseParams(0.2, 2), np.zeros((2, 2))), 0.8)


def test_basis_state_cannot_be_told():
    # collapse leaves a basis state unchanged, so any experiment gives p tr-weighted guessing
    psi = PureState.basis(3, 0)
    rng = np.random.default_rng(1)
    for _ in range(20):
        e = random_effect(rng, 3, "mixed")
        r = core.reliability_pure(psi, CollapseParams(0.3, 3), e)
        assert r <= 0.7 + 1e-12


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        core.reliability_pure(PureState.basis(2, 0), CollapseParams(0.3, 2), np.eye(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0, 1), st.integers(2, 6))
def test_reliability_in_unit_interval(seed, p, d):
    rng = np.random.default_rng(seed)
    r = core.reliability_pure(random_state(rng, d), CollapseParams(p, d), random_effect(rng, d, "mixed"))
    assert -1e-12 <= r <= 1 + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.01, 0.99), st.integers(2, 5))
def test_pure_and_density_agree(seed, p, d):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, d)
    e = random_effect(rng, d)
    par = CollapseParams(p, d)
    assert math.isclose(
        core.reliability_pure(psi, par, e), core.reliability_density(DensityMatrix.pure(psi), par, e), abs_tol=1e-12
    )


def test_reliability_matches_diag_form(rng):
    # R = 1 - p + tr[(p diag rho - (1-p) rho) E]
    d, p = 4, 0.37
    rho = random_density(rng, d)
    e = random_effect(rng, d)
    hyp = core.collapse_hypotheses(rho)
    lhs = core.reliability_density(rho, CollapseParams(p, d), e)
    assert math.isclose(lhs, core.discrimination_reliability(*hyp, p, e), abs_tol=1e-12)


def test_helstrom_qubit_pure_states():
    # orthogonal pure states are perfectly distinguishable
    r1 = np.diag([1.0, 0.0])
    r2 = np.diag([0.0, 1.0])
    e, r = core.helstrom_optimal(r1, r2, 0.3)
    assert math.isclose(r, 1.0, abs_tol=1e-12)
    assert np.allclose(e.matrix, r1)


def test_helstrom_identical_states_is_blind_guess():
    rho = np.eye(2) / 2
    for p in (0.2, 0.5, 0.8):
        _, r = core.helstrom_optimal(rho, rho, p)
        assert math.isclose(r, max(p, 1 - p), abs_tol=1e-12)


def test_helstrom_beats_random_effects(rng):
    for _ in range(20):
        d = int(rng.integers(2, 5))
        p = float(rng.uniform())
        r1, r2 = random_density(rng, d), random_density(rng, d)
        _, rmax = core.helstrom_optimal(r1, r2, p)
        for _ in range(50):
            assert core.discrimination_reliability(r1, r2, p, random_effect(rng, d, "mixed")) <= rmax + 1e-12


def test_collapse_helstrom_large_p_is_blind(rng):
    for d in (2, 3, 5):
        p = d / (d + 1) + 0.01
        rho = DensityMatrix.pure(random_state(rng, d))
        _, r = core.helstrom_optimal(*core.collapse_hypotheses(rho), p)
        assert math.isclose(r, p, abs_tol=1e-10)


def test_helstrom_upper_bound():
    assert math.isclose(core.helstrom_upper_bound(CollapseParams(0.2, 3)), 1 - 0.2 / 3)


def test_indicator_trace_nonpositive(rng):
    for _ in range(100):
        d = int(rng.integers(2, 7))
        par = CollapseParams(float(rng.uniform()), d)
        e = random_effect(rng, d, "mixed")
        a = core.collapse_indicator_operator(e, par)
        assert a.trace() <= 1e-12
        assert math.isclose(a.trace(), core.indicator_trace(e, par), abs_tol=1e-12)


def test_indicator_sign_matches_reliability(rng):
    d, p = 3, 0.42
    par = CollapseParams(p, d)
    e = random_effect(rng, d)
    a = core.collapse_indicator_operator(e, par).matrix
    for _ in range(200):
        psi = random_state(rng, d)
        form = np.real(psi.amplitudes.conj() @ a @ psi.amplitudes)
        margin = core.reliability_pure(psi, par, e) - max(p, 1 - p)
        if abs(form) > 1e-12:
            assert (form > 0) == (margin > 0)


def test_blind_guess():
    assert core.blind_guess_reliability(0.3) == 0.7
    assert np.allclose(core.blind_guess_effect(CollapseParams(0.5, 2)).matrix, 0)
    assert np.allclose(core.blind_guess_effect(CollapseParams(0.6, 2)).matrix, np.eye(2))


def test_simulate_collapse_reproducible():
    psi = PureState.normalized([1, 1, 1j])
    par = CollapseParams(0.5, 3)
    assert core.simulate_collapse(psi, par, 7) == core.simulate_collapse(psi, par, 7)


def test_collapse_branch_frequencies():
    psi = PureState.normalized([1, 2, 0])
    w = core.collapse_branch_probabilities(psi, 0.6)
    assert np.allclose(w, [0.4, 0.6 * 0.2, 0.6 * 0.8, 0.0])
    u = np.random.default_rng(3).random(200_000)
    counts = np.bincount(core.draw_collapse_branches(w, u), minlength=4) / u.size
    assert np.allclose(counts, w, atol=5e-3)
