"""Randomized property suite behind ``collapse-gauge verify``.

Each check draws its own inputs from substream ``i`` of the seed, so results
are reproducible and independent of check order. Sizes are kept small enough
for the whole suite to run in well under a minute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from . import core, measure, montecarlo, spectrum
from .core import CollapseParams, SignedSpectrum
from .montecarlo import stream
from .sampling import random_density, random_effect, random_hermitian, random_state


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _params(rng, d=None, lo=0.01, hi=0.99):
    d = int(rng.integers(2, 7)) if d is None else d
    return CollapseParams(float(rng.uniform(lo, hi)), d)


def check_reliability_range(rng):
    for _ in range(300):
        par = _params(rng, lo=0.0, hi=1.0)
        r = core.reliability_pure(random_state(rng, par.d), par, random_effect(rng, par.d, "mixed"))
        if not 0.0 <= r <= 1.0:
            return False, f"reliability {r}"
    return True, "300 cases"


def check_sphere_average(rng):
    par = CollapseParams(0.3, 4)
    e = random_effect(rng, 4)
    states = montecarlo.uniform_states(rng, 100_000, 4)
    op = core._reliability_operator(e.matrix, par.p)
    vals = montecarlo.quadratic_forms(states, op)
    target = core.reliability_density(np.eye(4) / 4, par, e)
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    return abs(vals.mean() - target) <= 3 * se, f"|mean - target| = {abs(vals.mean() - target):.2e}, 3se = {3 * se:.2e}"


def check_helstrom(rng):
    worst = -math.inf
    for _ in range(100):
        d = int(rng.integers(2, 6))
        p = float(rng.uniform())
        r1, r2 = random_density(rng, d), random_density(rng, d)
        _, r_max = core.helstrom_optimal(r1, r2, p)
        for _ in range(20):
            worst = max(worst, core.discrimination_reliability(r1, r2, p, random_effect(rng, d, "mixed")) - r_max)
    return worst <= 1e-10, f"max R(E) - R_max = {worst:.2e}"


def check_criterion_equivalence(rng):
    for _ in range(50):
        par = _params(rng)
        e = random_effect(rng, par.d, "mixed")
        a = core.collapse_indicator_operator(e, par).matrix
        states = montecarlo.uniform_states(rng, 200, par.d)
        form = montecarlo.quadratic_forms(states, a)
        rel = montecarlo.quadratic_forms(states, core._reliability_operator(e.matrix, par.p))
        margin = rel - max(par.p, 1 - par.p)
        clear = np.abs(form) > 1e-12
        if np.any((form[clear] > 0) != (margin[clear] > 0)):
            return False, "sign mismatch"
    return True, "50 x 200 states"


def check_trace_law(rng):
    for _ in range(300):
        par = _params(rng, lo=0.0, hi=1.0)
        e = random_effect(rng, par.d)
        tr = core.collapse_indicator_operator(e, par).trace()
        if abs(tr - core.indicator_trace(e, par)) > 1e-12 * par.d or tr > 1e-12:
            return False, f"trace {tr}"
    return True, "300 cases"


def check_complement(rng):
    for _ in range(300):
        w = random_hermitian(rng, int(rng.integers(2, 9))).eigenvalues()
        s = SignedSpectrum.from_eigenvalues(w)
        total = measure.measure_positive_form(s).value + measure.measure_positive_form(s.negated()).value
        if abs(total - 1) > 1e-8:
            return False, f"sum {total}"
    return True, "300 spectra"


def check_one_positive(rng):
    for _ in range(300):
        m = int(rng.integers(1, 8))
        betas = -rng.exponential(size=m)
        alpha = float(rng.uniform(0, -betas.sum()))
        if measure.measure_positive_form(SignedSpectrum((alpha,), tuple(betas))).value > 0.5 + 1e-12:
            return False, f"alpha {alpha}"
    return True, "300 spectra"


def check_d2_cap(rng):
    worst = 0.0
    for _ in range(300):
        par = _params(rng, d=2)
        worst = max(worst, measure.lambda_p(random_effect(rng, 2, "mixed"), par).value)
    return worst <= 0.5 + 1e-9, f"max {worst:.12f}"


def check_bounds(rng):
    for _ in range(300):
        par = _params(rng)
        e = random_effect(rng, par.d, "mixed")
        lam = measure.lambda_p(e, par).value
        mk = measure.markov_bound(e, par)
        if lam > measure.chernoff_bound(par) + 1e-9 or (mk < 1 and lam > mk + 1e-9):
            return False, f"lambda {lam} at p={par.p}"
    return True, "300 cases"


def check_unimodal(rng):
    from .search import is_unimodal, p_sweep

    grid = np.round(np.arange(0.05, 0.951, 0.05), 10)
    for _ in range(20):
        e = random_effect(rng, int(rng.integers(2, 6)), "mixed")
        if not is_unimodal(p_sweep(e, grid)):
            return False, "non-unimodal sweep"
    return True, "20 effects"


def check_scale_invariance(rng):
    for _ in range(200):
        s = SignedSpectrum.from_eigenvalues(random_hermitian(rng, int(rng.integers(2, 8))).eigenvalues())
        c = float(10 ** rng.uniform(-3, 3))
        if abs(measure.measure_positive_form(s).value - measure.measure_positive_form(s.scaled(c)).value) > 1e-12:
            return False, f"scale {c}"
    return True, "200 spectra"


def check_beta_continuity(rng):
    for _ in range(200):
        k = int(rng.integers(1, 4))
        alphas = tuple(rng.uniform(0.1, 1, k))
        b = -float(rng.uniform(0.1, 1))
        base = measure.measure_positive_form(SignedSpectrum(alphas, (b, b))).value
        moved = measure.measure_positive_form(SignedSpectrum(alphas, (b + 1e-9, b - 1e-9))).value
        if abs(base - moved) > 1e-6:
            return False, f"jump {abs(base - moved)}"
    return True, "200 spectra"


def check_ky_fan(rng):
    for _ in range(200):
        d = int(rng.integers(2, 7))
        b, c = random_hermitian(rng, d), random_hermitian(rng, d)
        if not all(spectrum.ky_fan_check(b, c, m) for m in range(1, d + 1)):
            return False, "violated"
    return True, "200 pairs, all m"


def check_schur_horn(rng):
    for _ in range(200):
        d = int(rng.integers(2, 7))
        e = random_effect(rng, d, "mixed")
        if not all(spectrum.schur_horn_check(e, m) for m in range(1, d + 1)):
            return False, "violated"
    return True, "200 effects, all m"


def check_partial_sums(rng):
    for _ in range(200):
        par = _params(rng)
        e = random_effect(rng, par.d, "mixed")
        if not all(spectrum.partial_sum_check(e, par, m) for m in range(1, par.d + 1)):
            return False, f"violated at p={par.p}"
        full = spectrum.partial_sum_bound(e, par, par.d)
        if abs(full - core.indicator_trace(e, par)) > 1e-12 * par.d:
            return False, "m = d does not reproduce the trace"
    return True, "200 cases, all m"


def check_spectral_bounds(rng):
    for _ in range(300):
        par = _params(rng)
        e = random_effect(rng, par.d, "mixed")
        if not spectrum.spectral_bounds_check(e, par):
            return False, f"violated at p={par.p}"
        if par.p != 0.5 and not spectrum.trace_normalized_check(e, par):
            return False, f"corollary violated at p={par.p}"
    return True, "300 cases"


def check_mc_agreement(rng):
    for i in range(5):
        par = _params(rng)
        e = random_effect(rng, par.d, "mixed")
        exact = measure.lambda_p(e, par).value
        est = montecarlo.estimate_lambda(e, par, 200_000, seed=int(rng.integers(2**31)))
        se = max(est.std_error, math.sqrt(exact * (1 - exact) / est.n))
        if abs(est.mean - exact) > 4 * se:
            return False, f"exact {exact} vs {est.mean}"
    return True, "5 cases at n = 2e5"


def check_mc_determinism(rng):
    par = _params(rng)
    e = random_effect(rng, par.d)
    seed = int(rng.integers(2**31))
    n = 3 * montecarlo.CHUNK + 17
    runs = {montecarlo.estimate_lambda(e, par, n, seed, threads=t).mean for t in (1, 2, 4)}
    return len(runs) == 1, f"{len(runs)} distinct results over thread counts"


def check_mc_complement(rng):
    a = random_hermitian(rng, 4).matrix
    s = int(rng.integers(2**31))
    e1 = montecarlo.estimate_positive_form(a, 200_000, s)
    e2 = montecarlo.estimate_positive_form(-a, 200_000, s + 1)
    joint = math.hypot(e1.std_error, e2.std_error)
    return abs(e1.mean + e2.mean - 1) <= 4 * joint, f"sum {e1.mean + e2.mean:.5f}"


def check_mgf(rng):
    for _ in range(20):
        scale, t = float(rng.uniform(0.1, 2)), float(rng.uniform(-1, 0.2))
        if 2 * scale * t >= 0.9:
            continue
        val, _ = integrate.quad(lambda x: 0.5 * math.exp(x * (scale * t - 0.5)), 0, np.inf)
        if abs(val - montecarlo.exp_half_mgf(scale, t)) > 1e-8:
            return False, f"quadrature {val}"
    return True, "20 cases"


def check_hypoexp(rng):
    for _ in range(50):
        n = int(rng.integers(1, 9))
        lam = rng.uniform(0.3, 1.5, n)
        c = float(rng.uniform(0.05, 6))
        if abs(montecarlo.hypoexp_density(lam, c) - montecarlo.hypoexp_density_recursive(lam, c)) > 1e-8:
            return False, f"n={n}"
    return True, "50 cases"


CHECKS: dict[str, list[tuple[str, Callable]]] = {
    "core": [
        ("reliability in [0,1]", check_reliability_range),
        ("sphere average = reliability of I/d", check_sphere_average),
        ("Helstrom optimality and consistency", check_helstrom),
        ("<psi|A_p(E)|psi> > 0 iff beats blind guessing", check_criterion_equivalence),
        ("trace law of A_p(E)", check_trace_law),
    ],
    "lambda": [
        ("complement identity", check_complement),
        ("one positive eigenvalue cap", check_one_positive),
        ("d = 2 cap", check_d2_cap),
        ("Markov and Chernoff bounds", check_bounds),
        ("unimodality in p", check_unimodal),
        ("scale invariance", check_scale_invariance),
        ("continuity in coincident betas", check_beta_continuity),
    ],
    "spectrum": [
        ("Ky Fan", check_ky_fan),
        ("Schur-Horn and diagonal sandwich", check_schur_horn),
        ("partial-sum bounds", check_partial_sums),
        ("eigenvalue and eigenvalue-sum bounds", check_spectral_bounds),
    ],
    "montecarlo": [
        ("exact lambda vs Monte Carlo", check_mc_agreement),
        ("determinism across thread counts", check_mc_determinism),
        ("estimate complement", check_mc_complement),
        ("exponential moment generating function", check_mgf),
        ("hypoexponential density vs recursion", check_hypoexp),
    ],
}


def run_all(seed: int = 0) -> list[CheckResult]:
    results = []
    index = 0
    for module, checks in CHECKS.items():
        for name, fn in checks:
            try:
                ok, detail = fn(stream(seed, index))
            except Exception as exc:  # a crash is a failed check, not a crashed suite
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            results.append(CheckResult(f"{module}: {name}", bool(ok), detail))
            index += 1
    return results


def format_table(results) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check'.ljust(width)}  result  detail", "-" * (width + 24)]
    for r in results:
        lines.append(f"{r.name.ljust(width)}  {'PASS' if r.passed else 'FAIL':6}  {r.detail}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
