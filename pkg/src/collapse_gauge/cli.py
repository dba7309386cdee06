"""Command-line front end.

Results go to stdout (or ``--out``) as JSON, or as CSV for ``sweep``.
Diagnostics go to stderr. Exit codes: 0 success, 1 failed ``verify`` checks,
2 invalid input, 3 I/O error.

Effects are given with ``--effect``: either a JSON operator file or one of
the built-in names ``zero``, ``identity``, ``uniform-projector`` and
``rank-k:K``. The last is the projector onto the first K Fourier vectors,
whose span contains the uniform superposition.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import core, measure, montecarlo, search, spectrum
from .core import CollapseParams, DensityMatrix, Effect, PureState, ValidationError
from .io import operator_to_json, parse_operator_file, parse_state_file

log = logging.getLogger("collapse_gauge")

COMMANDS = ("reliability", "helstrom", "lambda", "bounds", "mc", "search", "sweep", "verify")
EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    p: float = 0.5
    d: int = 2
    n: int = 1_000_000
    seed: int = 0
    output_format: str = "json"
    out_path: str | None = None
    effect: str | None = None
    state: str | None = None
    rho1: str | None = None
    rho2: str | None = None
    budget: int = 10_000
    strategy: str = "random_restart_local"
    grid: str = "0.05:0.95:0.05"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"--p {self.p} outside [0, 1]")
        if self.n < 1:
            raise ValidationError("--n must be at least 1")
        if self.d < 2:
            raise ValidationError("--d must be at least 2")
        if self.output_format not in ("json", "csv"):
            raise ValidationError("--format must be json or csv")


def fourier_projector(d: int, rank: int) -> Effect:
    if not 0 <= rank <= d:
        raise ValidationError(f"rank {rank} outside 0..{d}")
    f = np.exp(2j * np.pi * np.outer(np.arange(d), np.arange(d)) / d) / np.sqrt(d)
    v = f[:, :rank]
    return Effect(v @ v.conj().T)


def named_effect(name: str, d: int) -> Effect:
    if name == "zero":
        return Effect(np.zeros((d, d)))
    if name == "identity":
        return Effect(np.eye(d))
    if name == "uniform-projector":
        return search.uniform_projector_effect(d)
    if name.startswith("rank-k:"):
        try:
            rank = int(name.split(":", 1)[1])
        except ValueError:
            raise ValidationError(f"bad rank in {name!r}") from None
        return fourier_projector(d, rank)
    raise ValidationError(f"unknown built-in effect {name!r}")


def load_effect(cfg: RunConfig) -> Effect:
    spec = cfg.effect or cfg.input_path
    if spec is None:
        raise ValidationError("an effect is required (--effect NAME|FILE)")
    if not Path(spec).exists() and not spec.endswith(".json"):
        return named_effect(spec, cfg.d)
    op = parse_operator_file(spec)
    if isinstance(op, DensityMatrix):
        raise ValidationError(f"{spec} holds a density matrix, expected an effect")
    effect = op if isinstance(op, Effect) else Effect(op.op if hasattr(op, "op") else op)
    cfg.d = effect.d
    return effect


def load_state(cfg: RunConfig) -> PureState:
    spec = cfg.state
    if spec is None or spec == "uniform":
        return PureState(np.full(cfg.d, 1 / np.sqrt(cfg.d), dtype=complex))
    if spec == "random":
        return montecarlo.sample_uniform_state(cfg.d, cfg.seed)
    if spec.startswith("basis:"):
        return PureState.basis(cfg.d, int(spec.split(":", 1)[1]))
    return parse_state_file(spec)


def load_density(path: str) -> DensityMatrix:
    op = parse_operator_file(path)
    return op if isinstance(op, DensityMatrix) else DensityMatrix(op if not hasattr(op, "op") else op.op)


def _lambda_doc(effect: Effect, par: CollapseParams) -> dict:
    res = measure.lambda_p(effect, par)
    return {
        "lambda": res.value,
        "method": res.method.value,
        "perturbation_applied": res.perturbation_applied,
        "p": par.p,
        "d": par.d,
        "bound_markov": measure.markov_bound(effect, par),
        "bound_chernoff": measure.chernoff_bound(par),
        "conjecture_bound": measure.conjecture_bound(par.d),
    }


def cmd_reliability(cfg: RunConfig) -> dict:
    effect = load_effect(cfg)
    par = CollapseParams(cfg.p, effect.d)
    doc = {"p": par.p, "d": par.d, "blind_guess": core.blind_guess_reliability(par.p)}
    if cfg.rho1:
        doc["reliability"] = core.reliability_density(load_density(cfg.rho1), par, effect)
    else:
        doc["reliability"] = core.reliability_pure(load_state(cfg), par, effect)
    return doc


def cmd_helstrom(cfg: RunConfig) -> dict:
    if cfg.rho1 and cfg.rho2:
        r1, r2 = load_density(cfg.rho1), load_density(cfg.rho2)
    else:
        rho = load_density(cfg.rho1) if cfg.rho1 else DensityMatrix.pure(load_state(cfg))
        r1, r2 = core.collapse_hypotheses(rho)
    e_opt, r_max = core.helstrom_optimal(r1, r2, cfg.p)
    lam_plus, lam_minus = spectrum.signed_sums(core.discrimination_operator(r1, r2, cfg.p))
    return {
        "p": cfg.p,
        "r_max": r_max,
        "lambda_plus": lam_plus,
        "lambda_minus": lam_minus,
        "blind_guess": core.blind_guess_reliability(cfg.p),
        "upper_bound": core.helstrom_upper_bound(CollapseParams(cfg.p, e_opt.d)),
        "effect": operator_to_json(e_opt),
    }


def cmd_lambda(cfg: RunConfig) -> dict:
    effect = load_effect(cfg)
    return _lambda_doc(effect, CollapseParams(cfg.p, effect.d))


def cmd_bounds(cfg: RunConfig) -> dict:
    p, d = cfg.p, cfg.d
    doc = {
        "p": p,
        "d": d,
        "chernoff": measure.chernoff_bound(p),
        "conjecture": measure.conjecture_bound(d),
        "helstrom_upper": core.helstrom_upper_bound(CollapseParams(p, d)),
    }
    if 0 < p < 1:
        doc["single_negative_regime"] = measure.single_negative_regime(p)
    if d >= 3:
        doc["good_p_threshold"] = measure.good_p_threshold(d)
    if cfg.effect or cfg.input_path:
        effect = load_effect(cfg)
        par = CollapseParams(p, effect.d)
        doc["markov"] = measure.markov_bound(effect, par)
        if 0 < p < 1:
            b = spectrum.indicator_spectral_bounds(effect, par)
            doc["spectral"] = {
                "lambda_max_bound": b.lambda_max_bound,
                "lambda_min_bound": b.lambda_min_bound,
                "alpha_sum_bound": b.alpha_sum_bound,
                "beta_sum_bound": b.beta_sum_bound,
            }
    return doc


def cmd_mc(cfg: RunConfig) -> dict:
    effect = load_effect(cfg)
    par = CollapseParams(cfg.p, effect.d)
    est = montecarlo.estimate_lambda(effect, par, cfg.n, cfg.seed)
    return {
        "mean": est.mean,
        "std_error": est.std_error,
        "n": est.n,
        "seed": est.seed,
        "exact": measure.lambda_p(effect, par).value,
    }


def cmd_search(cfg: RunConfig) -> dict:
    report = search.maximize_lambda(cfg.d, cfg.p, cfg.budget, cfg.strategy, cfg.seed)
    if report.violated_conjecture:
        log.warning("best value %.12f exceeds the conjectured bound %.12f", report.best_lambda, measure.conjecture_bound(cfg.d))
    return report.to_dict()


def parse_grid(text: str) -> list[float]:
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    return [float(x) for x in text.split(",") if x.strip()]


def cmd_sweep(cfg: RunConfig) -> list[dict]:
    effect = load_effect(cfg)
    rows = []
    for p, _ in search.p_sweep(effect, parse_grid(cfg.grid)):
        par = CollapseParams(p, effect.d)
        res = measure.lambda_p(effect, par)
        rows.append(
            {
                "p": p,
                "lambda": res.value,
                "method": res.method.value,
                "bound_markov": measure.markov_bound(effect, par),
                "bound_chernoff": measure.chernoff_bound(par),
            }
        )
    return rows


SWEEP_FIELDS = ("p", "lambda", "method", "bound_markov", "bound_chernoff")


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_FIELDS)
    for row in rows:
        writer.writerow([format(row[k], ".17g") if isinstance(row[k], float) else row[k] for k in SWEEP_FIELDS])
    return buf.getvalue()


HANDLERS = {
    "reliability": cmd_reliability,
    "helstrom": cmd_helstrom,
    "lambda": cmd_lambda,
    "bounds": cmd_bounds,
    "mc": cmd_mc,
    "search": cmd_search,
    "sweep": cmd_sweep,
}


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out_path:
        Path(cfg.out_path).write_text(text)
    else:
        sys.stdout.write(text)


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        if cfg.command == "verify":
            from .verify import format_table, run_all

            results = run_all(cfg.seed)
            _emit(format_table(results) + "\n", cfg)
            return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
        result = HANDLERS[cfg.command](cfg)
        if cfg.output_format == "csv":
            text = to_csv(result if isinstance(result, list) else [result])
        else:
            text = json.dumps(result, indent=2) + "\n"
        _emit(text, cfg)
        return EXIT_OK
    except ValidationError as exc:
        log.error("invalid input: %s", exc)
        return EXIT_INVALID
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="collapse-gauge", description="Detectability of wave-function collapse.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", dest="input_path")
        sp.add_argument("--effect", help="effect file or built-in name")
        sp.add_argument("--state", help="state file, 'uniform', 'random' or 'basis:K'")
        sp.add_argument("--rho1", help="density file (prior p hypothesis for helstrom)")
        sp.add_argument("--rho2", help="density file (prior 1-p hypothesis for helstrom)")
        sp.add_argument("--p", type=float, default=0.5)
        sp.add_argument("--d", type=int, default=2)
        sp.add_argument("--n", type=int, default=1_000_000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=10_000)
        sp.add_argument("--strategy", default="random_restart_local", choices=[s.value for s in search.Strategy])
        sp.add_argument("--grid", default="0.05:0.95:0.05", help="start:stop:step or comma list")
        sp.add_argument("--format", dest="output_format", default=None, choices=("json", "csv"))
        sp.add_argument("--out", dest="out_path")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    fields = vars(args)
    if fields["output_format"] is None:
        fields["output_format"] = "csv" if args.command == "sweep" else "json"
    return run(RunConfig(**fields))


if __name__ == "__main__":
    sys.exit(main())
