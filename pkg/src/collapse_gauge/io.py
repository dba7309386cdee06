"""JSON encoding of operators and states.

Operator files look like::

    {"kind": "effect", "d": 2, "entries": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}

Complex numbers are ``[re, im]`` pairs and matrices are row-major. ``kind`` is
one of ``effect``, ``density`` or ``hermitian``. State files use
``{"kind": "state", "d": d, "amplitudes": [[re, im], ...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import DensityMatrix, Effect, HermitianOperator, PureState, ValidationError, as_matrix

KINDS = {"effect": Effect, "density": DensityMatrix, "hermitian": HermitianOperator}


def _encode(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def _decode(pair) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise ValidationError(f"complex entry must be an [re, im] pair, got {pair!r}")
    re, im = pair
    if isinstance(re, bool) or isinstance(im, bool) or not all(isinstance(x, (int, float)) for x in (re, im)):
        raise ValidationError(f"complex entry must hold two numbers, got {pair!r}")
    return complex(re, im)


def kind_of(op) -> str:
    if isinstance(op, Effect):
        return "effect"
    if isinstance(op, DensityMatrix):
        return "density"
    return "hermitian"


def operator_to_json(op, kind: str | None = None) -> dict:
    m = as_matrix(op)
    return {
        "kind": kind or kind_of(op),
        "d": int(m.shape[0]),
        "entries": [[_encode(z) for z in row] for row in m],
    }


def operator_from_json(doc: dict):
    if not isinstance(doc, dict):
        raise ValidationError("operator document must be a JSON object")
    kind = doc.get("kind", "hermitian")
    if kind not in KINDS:
        raise ValidationError(f"unknown operator kind {kind!r}")
    d, entries = doc.get("d"), doc.get("entries")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ValidationError("'d' must be a positive integer")
    if not isinstance(entries, list) or len(entries) != d or any(not isinstance(r, list) or len(r) != d for r in entries):
        raise ValidationError(f"'entries' must be a {d} x {d} array of [re, im] pairs")
    m = np.array([[_decode(z) for z in row] for row in entries], dtype=complex)
    return KINDS[kind](HermitianOperator(m))


def state_to_json(psi: PureState) -> dict:
    return {"kind": "state", "d": psi.d, "amplitudes": [_encode(z) for z in psi.amplitudes]}


def state_from_json(doc: dict) -> PureState:
    if not isinstance(doc, dict) or doc.get("kind", "state") != "state":
        raise ValidationError("state document must be an object with kind 'state'")
    amps = doc.get("amplitudes")
    if not isinstance(amps, list):
        raise ValidationError("'amplitudes' must be a list of [re, im] pairs")
    v = np.array([_decode(z) for z in amps], dtype=complex)
    if doc.get("d", v.size) != v.size:
        raise ValidationError("'d' does not match the number of amplitudes")
    return PureState(v)


def _load(path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def parse_operator_file(path):
    """Read an operator file; raises ValidationError on schema or invariant problems, OSError on I/O."""
    return operator_from_json(_load(path))


def parse_state_file(path) -> PureState:
    return state_from_json(_load(path))


def write_operator_file(path, op, kind: str | None = None) -> None:
    Path(path).write_text(json.dumps(operator_to_json(op, kind)))
