"""Domain types, the collapse channel, reliabilities and Helstrom discrimination.

The collapse basis is always the standard coordinate basis. A problem posed
in another orthonormal basis ``B`` is handled by conjugating the inputs with
the unitary whose columns are ``B`` before calling into this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-12
HERM_TOL = 1e-12
VAL_TOL = 1e-10
TRACE_TOL = 1e-10


class ValidationError(ValueError):
    """An input violates a domain invariant beyond its tolerance."""


class DimensionMismatch(ValidationError):
    pass


def as_matrix(x) -> np.ndarray:
    """Return the complex matrix behind an operator-like object or array."""
    if isinstance(x, (Effect, DensityMatrix)):
        return x.op.matrix
    if isinstance(x, HermitianOperator):
        return x.matrix
    return np.asarray(x, dtype=complex)


def _check_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")


class HermitianOperator:
    """Dense d x d Hermitian matrix, symmetrized as (M + M^dagger)/2 on construction."""

    def __init__(self, entries, herm_tol: float = HERM_TOL):
        m = as_matrix(entries).astype(complex, copy=True)
        _check_square(m)
        dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        scale = max(1.0, float(np.max(np.abs(m))))
        if dev > herm_tol * scale:
            raise ValidationError(f"matrix is not Hermitian (max |M - M^dagger| = {dev:.3e})")
        self.matrix = 0.5 * (m + m.conj().T)
        self.matrix.setflags(write=False)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return np.linalg.eigvalsh(self.matrix)[::-1]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"HermitianOperator(d={self.d})"


class Effect:
    """The "yes" operator E of a yes-no experiment, 0 <= E <= I.

    Eigenvalues within ``val_tol`` outside [0, 1] are treated as round-off and
    clamped in :attr:`spectrum`; anything further out is rejected.
    """

    def __init__(self, op, val_tol: float = VAL_TOL):
        self.op = op if isinstance(op, HermitianOperator) else HermitianOperator(op)
        eigs = self.op.eigenvalues()
        if eigs[-1] < -val_tol:
            raise ValidationError(f"effect has eigenvalue {eigs[-1]:.6g} < 0")
        if eigs[0] > 1 + val_tol:
            raise ValidationError(f"effect has eigenvalue {eigs[0]:.6g} > 1")
        self.spectrum = np.clip(eigs, 0.0, 1.0)

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def d(self) -> int:
        return self.op.d

    def __repr__(self):
        return f"Effect(d={self.d})"


class DensityMatrix:
    """Positive semidefinite operator of unit trace."""

    def __init__(self, op, val_tol: float = VAL_TOL):
        self.op = op if isinstance(op, HermitianOperator) else HermitianOperator(op)
        eigs = self.op.eigenvalues()
        if eigs[-1] < -val_tol:
            raise ValidationError(f"density matrix has eigenvalue {eigs[-1]:.6g} < 0")
        tr = self.op.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix has trace {tr!r}, expected 1")
        self.spectrum = np.clip(eigs, 0.0, None)

    @classmethod
    def pure(cls, psi: "PureState") -> "DensityMatrix":
        v = psi.amplitudes
        return cls(np.outer(v, v.conj()))

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def d(self) -> int:
        return self.op.d

    def __repr__(self):
        return f"DensityMatrix(d={self.d})"


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    norm_tol: float = field(default=NORM_TOL, repr=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).copy()
        if v.ndim != 1 or v.size < 2:
            raise ValidationError("a pure state needs a complex vector of length d >= 2")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > self.norm_tol:
            raise ValidationError(f"state has norm {norm!r}, expected 1")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def normalized(cls, v) -> "PureState":
        v = np.asarray(v, dtype=complex)
        return cls(v / np.linalg.norm(v))

    @classmethod
    def basis(cls, d: int, k: int) -> "PureState":
        v = np.zeros(d, dtype=complex)
        v[k] = 1.0
        return cls(v)

    @property
    def d(self) -> int:
        return self.amplitudes.size

    def __eq__(self, other):
        return isinstance(other, PureState) and np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self):
        return hash(self.amplitudes.tobytes())


@dataclass(frozen=True)
class CollapseParams:
    p: float
    d: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"collapse probability p={self.p} outside [0, 1]")
        if int(self.d) != self.d or self.d < 2:
            raise ValidationError(f"dimension d={self.d} must be an integer >= 2")


@dataclass(frozen=True)
class SignedSpectrum:
    """Eigenvalues split into positive ``alphas`` and non-positive ``betas``.

    Both lists are sorted descending. Values within ``zero_tol`` of zero are
    snapped to 0 and counted among the betas.
    """

    alphas: tuple
    betas: tuple
    zero_tol: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(sorted((float(a) for a in self.alphas), reverse=True)))
        object.__setattr__(self, "betas", tuple(sorted((float(b) for b in self.betas), reverse=True)))
        if any(a <= 0 for a in self.alphas):
            raise ValidationError("alphas must be strictly positive")
        if any(b > 0 for b in self.betas):
            raise ValidationError("betas must be non-positive")

    @classmethod
    def from_eigenvalues(cls, eigenvalues, zero_tol: float | None = None, trace: float | None = None):
        eigs = np.sort(np.asarray(eigenvalues, dtype=float))[::-1]
        norm = float(np.max(np.abs(eigs))) if eigs.size else 0.0
        if zero_tol is None:
            zero_tol = 1e-10 * norm
        if trace is not None and abs(eigs.sum() - trace) > 1e-9 * max(norm, 1e-300):
            raise ValidationError(f"eigenvalues sum to {eigs.sum()!r}, trace is {trace!r}")
        alphas = eigs[eigs > zero_tol]
        betas = eigs[eigs <= zero_tol]
        betas = np.where(np.abs(betas) <= zero_tol, 0.0, betas)
        return cls(tuple(alphas), tuple(betas), zero_tol)

    @classmethod
    def from_operator(cls, op, zero_tol: float | None = None):
        m = as_matrix(op)
        m = 0.5 * (m + m.conj().T)
        return cls.from_eigenvalues(np.linalg.eigvalsh(m), zero_tol, trace=float(np.trace(m).real))

    @property
    def d(self) -> int:
        return len(self.alphas) + len(self.betas)

    @property
    def k(self) -> int:
        return len(self.alphas)

    @property
    def m(self) -> int:
        return len(self.betas)

    def negated(self) -> "SignedSpectrum":
        """Spectrum of -A. Former zero betas stay on the non-positive side."""
        new_alphas = [-b for b in self.betas if b < 0]
        new_betas = [-a for a in self.alphas] + [0.0] * sum(1 for b in self.betas if b == 0)
        return SignedSpectrum(tuple(new_alphas), tuple(new_betas), self.zero_tol)

    def scaled(self, c: float) -> "SignedSpectrum":
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return SignedSpectrum(tuple(c * a for a in self.alphas), tuple(c * b for b in self.betas), c * self.zero_tol)


def _same_dim(*mats: np.ndarray) -> int:
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"operator dimensions disagree: {sorted(dims)}")
    return dims.pop()


def diag_part(E) -> HermitianOperator:
    """Keep the diagonal of ``E`` in the collapse basis and zero everything else."""
    m = as_matrix(E)
    return HermitianOperator(np.diag(np.diag(m)))


def collapse_branch_probabilities(psi: PureState, p: float) -> np.ndarray:
    """Weights [1-p, p|c_1|^2, ..., p|c_d|^2] of the no-collapse and collapse branches."""
    born = np.abs(psi.amplitudes) ** 2
    return np.concatenate(([1.0 - p], p * born))


def draw_collapse_branches(weights: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """Inverse-CDF branch selection, one uniform per draw.

    Returns 0 for "no collapse" and k >= 1 for collapse onto basis vector k-1.
    Zero-weight branches are never returned.
    """
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, uniforms, side="right")
    idx = np.minimum(idx, len(weights) - 1)
    # side="right" cannot land on a zero-width bin except past the end;
    # walk back to the last branch that carries weight
    nonzero = np.flatnonzero(weights > 0)
    bad = weights[idx] <= 0
    if np.any(bad):
        pos = np.searchsorted(nonzero, idx[bad], side="right") - 1
        idx[bad] = nonzero[np.maximum(pos, 0)]
    return idx


def simulate_collapse(psi: PureState, params: CollapseParams, seed: int) -> PureState:
    """Draw the post-collapse state psi' for one run of the collapse channel."""
    if psi.d != params.d:
        raise DimensionMismatch(f"state has d={psi.d}, params have d={params.d}")
    rng = np.random.default_rng(seed)
    weights = collapse_branch_probabilities(psi, params.p)
    branch = int(draw_collapse_branches(weights, rng.random(1))[0])
    if branch == 0:
        return psi
    k = branch - 1
    c = psi.amplitudes[k]
    v = np.zeros(psi.d, dtype=complex)
    v[k] = c / abs(c)
    return PureState(v)


def _reliability_operator(E: np.ndarray, p: float) -> np.ndarray:
    d = E.shape[0]
    return p * np.diag(np.diag(E)) + (1.0 - p) * (np.eye(d) - E)


def reliability_pure(psi: PureState, params: CollapseParams, E) -> float:
    """Probability that E correctly retrodicts collapse for the known initial state psi."""
    m = as_matrix(E)
    if m.shape[0] != psi.d or psi.d != params.d:
        raise DimensionMismatch(f"state d={psi.d}, effect d={m.shape[0]}, params d={params.d}")
    v = psi.amplitudes
    r = float(np.real(v.conj() @ _reliability_operator(m, params.p) @ v))
    return min(1.0, max(0.0, r))


def reliability_density(rho, params: CollapseParams, E) -> float:
    r"""Reliability averaged over a state distribution with density matrix ``rho``.

    Computes tr[rho (p diag E + (1-p)(I - E))].
    """
    r_m, e_m = as_matrix(rho), as_matrix(E)
    if _same_dim(r_m, e_m) != params.d:
        raise DimensionMismatch(f"operators have d={r_m.shape[0]}, params have d={params.d}")
    r = float(np.real(np.trace(r_m @ _reliability_operator(e_m, params.p))))
    return min(1.0, max(0.0, r))


def discrimination_operator(rho1, rho2, p: float) -> HermitianOperator:
    """A = p rho1 - (1-p) rho2, where rho1 is the hypothesis with prior p."""
    a, b = as_matrix(rho1), as_matrix(rho2)
    _same_dim(a, b)
    return HermitianOperator(p * a - (1.0 - p) * b)


def discrimination_reliability(rho1, rho2, p: float, E) -> float:
    """Success probability 1 - p + tr[A E] of answering "rho1" on outcome E."""
    a = discrimination_operator(rho1, rho2, p).matrix
    e = as_matrix(E)
    _same_dim(a, e)
    return 1.0 - p + float(np.real(np.trace(a @ e)))


def helstrom_optimal(rho1, rho2, p: float) -> tuple[Effect, float]:
    """Optimal effect and maximal reliability for telling rho1 (prior p) from rho2.

    Returns the projection onto the positive eigenspace of A. Every E with
    P+ <= E <= P+ + P0 (P0 the kernel projection of A) is optimal as well.
    """
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"prior p={p} outside [0, 1]")
    a = discrimination_operator(rho1, rho2, p).matrix
    w, v = np.linalg.eigh(a)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(w))))
    pos = w > tol
    lam_plus = float(np.sum(w[pos]))
    lam_minus = float(np.sum(w[w < -tol]))
    r_plus = (1.0 - p) + lam_plus
    r_minus = p - lam_minus
    if abs(r_plus - r_minus) > 1e-10:
        raise ArithmeticError(f"Helstrom values disagree: {r_plus!r} vs {r_minus!r}")
    vp = v[:, pos]
    projector = vp @ vp.conj().T
    return Effect(projector), r_plus


def collapse_hypotheses(rho) -> tuple[HermitianOperator, HermitianOperator]:
    """(diag rho, rho): collapsed hypothesis first since it carries prior p."""
    m = as_matrix(rho)
    return diag_part(m), HermitianOperator(m)


def helstrom_upper_bound(params: CollapseParams) -> float:
    return max(params.p, 1.0 - params.p / params.d)


def collapse_indicator_operator(E, params: CollapseParams) -> HermitianOperator:
    """Operator A_p(E) with R_psi(E) = max(p, 1-p) + <psi|A_p(E)|psi>."""
    m = as_matrix(E)
    if m.shape[0] != params.d:
        raise DimensionMismatch(f"effect has d={m.shape[0]}, params have d={params.d}")
    p = params.p
    if p <= 0.5:
        a = p * np.diag(np.diag(m)) - (1.0 - p) * m
    else:
        f = np.eye(params.d) - m
        a = (1.0 - p) * f - p * np.diag(np.diag(f))
    return HermitianOperator(a)


def indicator_trace(E, params: CollapseParams) -> float:
    """Closed-form trace of A_p(E); never positive."""
    tr_e = float(np.trace(as_matrix(E)).real)
    p = params.p
    if p <= 0.5:
        return -(1.0 - 2.0 * p) * tr_e
    return -(2.0 * p - 1.0) * (params.d - tr_e)


def blind_guess_reliability(p: float) -> float:
    return max(p, 1.0 - p)


def blind_guess_effect(params: CollapseParams) -> Effect:
    """E = 0 ("no") for p <= 1/2, E = I ("yes") otherwise."""
    d = params.d
    return Effect(np.zeros((d, d)) if params.p <= 0.5 else np.eye(d))
