import csv
import io
import json
import math

import numpy as np
import pytest

from collapse_gauge import cli
from collapse_gauge.core import DensityMatrix, Effect, HermitianOperator, PureState, ValidationError
from collapse_gauge.io import (
    operator_from_json,
    operator_to_json,
    parse_operator_file,
    parse_state_file,
    state_to_json,
    write_operator_file,
)
from collapse_gauge.sampling import random_effect


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def test_identity_effect_file(tmp_path):
    f = write(tmp_path, "id.json", {"kind": "effect", "d": 2, "entries": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]})
    e = parse_operator_file(f)
    assert isinstance(e, Effect)
    assert np.allclose(e.op.eigenvalues(), [1, 1])


def test_round_trip_bit_exact(rng, tmp_path):
    for i in range(100):
        e = random_effect(rng, int(rng.integers(2, 6)), "mixed")
        path = tmp_path / f"e{i}.json"
        write_operator_file(path, e)
        back = parse_operator_file(path)
        assert np.array_equal(back.matrix, e.matrix)
        assert operator_to_json(back) == operator_to_json(e)


def test_kinds():
    doc = operator_to_json(np.diag([0.5, 0.5]), kind="density")
    assert isinstance(operator_from_json(doc), DensityMatrix)
    doc["kind"] = "hermitian"
    assert isinstance(operator_from_json(doc), HermitianOperator)
    doc["kind"] = "matrix"
    with pytest.raises(ValidationError):
        operator_from_json(doc)


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "effect", "d": 2, "entries": [[[1, 0]], [[0, 0]]]},
        {"kind": "effect", "d": "2", "entries": []},
        {"kind": "effect", "d": 1, "entries": [["1", 0]]},
        {"kind": "effect", "d": 1, "entries": [[[1, 0, 0]]]},
        [1, 2],
    ],
)
def test_schema_violations(doc):
    with pytest.raises(ValidationError):
        operator_from_json(doc)


def test_density_trace_violation(tmp_path):
    f = write(tmp_path, "r.json", {"kind": "density", "d": 2, "entries": [[[0.5, 0], [0, 0]], [[0, 0], [0.49, 0]]]})
    with pytest.raises(ValidationError):
        parse_operator_file(f)


def test_state_round_trip(tmp_path):
    psi = PureState.normalized([1, 1j, -1])
    f = write(tmp_path, "s.json", state_to_json(psi))
    assert parse_state_file(f) == psi


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_lambda_uniform_projector(capsys):
    code, out, _ = run_cli(["lambda", "--d", "3", "--p", "0.47", "--effect", "uniform-projector"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert math.isclose(doc["lambda"], 0.5038170958427279, abs_tol=1e-12)
    assert doc["method"] in ("exact", "complemented")


def test_cli_bounds(capsys):
    code, out, _ = run_cli(["bounds", "--p", "0.146"], capsys)
    assert code == 0
    assert abs(json.loads(out)["chernoff"] - 0.5) < 2e-3


def test_cli_zero_effect(tmp_path, capsys):
    f = write(tmp_path, "zero.json", {"kind": "effect", "d": 2, "entries": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]})
    code, out, _ = run_cli(["lambda", "--effect", f, "--p", "0.3"], capsys)
    assert code == 0 and json.loads(out)["lambda"] == 0


def test_cli_exit_codes(tmp_path, capsys, caplog):
    bad = write(tmp_path, "bad.json", "{not json")
    assert run_cli(["lambda", "--effect", bad], capsys)[0] == 2
    big = write(tmp_path, "big.json", {"kind": "effect", "d": 2, "entries": [[[1.5, 0], [0, 0]], [[0, 0], [0, 0]]]})
    code, _, err = run_cli(["lambda", "--effect", big], capsys)
    assert code == 2 and "eigenvalue 1.5" in err + caplog.text
    rho = write(tmp_path, "rho.json", {"kind": "density", "d": 2, "entries": [[[0.5, 0], [0, 0]], [[0, 0], [0.49, 0]]]})
    assert run_cli(["helstrom", "--rho1", rho], capsys)[0] == 2
    assert run_cli(["lambda", "--effect", str(tmp_path / "missing.json")], capsys)[0] == 3
    assert run_cli(["lambda", "--p", "1.5", "--effect", "zero"], capsys)[0] == 2
    assert run_cli(["mc", "--n", "0", "--effect", "zero"], capsys)[0] == 2
    assert run_cli(["lambda", "--effect", "rank-k:9", "--d", "3"], capsys)[0] == 2


def test_cli_sweep_csv(capsys, tmp_path):
    out_file = tmp_path / "sweep.csv"
    code, _, _ = run_cli(
        ["sweep", "--d", "3", "--effect", "rank-k:2", "--grid", "0.1:0.9:0.2", "--out", str(out_file)], capsys
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out_file.read_text())))
    assert rows[0] == ["p", "lambda", "method", "bound_markov", "bound_chernoff"]
    assert len(rows) == 6
    for row in rows[1:]:
        assert float(row[1]) <= float(row[4]) + 1e-9
    # 17 significant digits round-trip exactly
    assert float(rows[1][0]) == 0.1


def test_cli_helstrom_collapse(capsys):
    code, out, _ = run_cli(["helstrom", "--d", "3", "--p", "0.8", "--state", "uniform"], capsys)
    doc = json.loads(out)
    assert code == 0 and math.isclose(doc["r_max"], 0.8, abs_tol=1e-10)


def test_cli_reliability_and_mc(capsys):
    code, out, _ = run_cli(["reliability", "--d", "2", "--p", "0.3", "--effect", "identity"], capsys)
    assert code == 0 and math.isclose(json.loads(out)["reliability"], 0.3)
    code, out, _ = run_cli(["mc", "--d", "3", "--p", "0.4", "--effect", "uniform-projector", "--n", "50000"], capsys)
    doc = json.loads(out)
    assert code == 0 and abs(doc["mean"] - doc["exact"]) <= 4 * doc["std_error"]


def test_cli_search(capsys):
    code, out, _ = run_cli(["search", "--d", "3", "--p", "0.5", "--budget", "300"], capsys)
    doc = json.loads(out)
    assert code == 0 and not doc["violated_conjecture"]


def test_cli_verify(capsys):
    code, out, _ = run_cli(["verify", "--seed", "3"], capsys)
    assert code == 0
    assert "21/21 checks passed" in out


def test_fourier_projector_rank_one_is_uniform():
    from collapse_gauge.search import uniform_projector_effect

    assert np.allclose(cli.fourier_projector(4, 1).matrix, uniform_projector_effect(4).matrix)
