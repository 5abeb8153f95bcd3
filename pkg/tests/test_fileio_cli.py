import io
import json
import math

import numpy as np
import pytest

from qconverse.channel import erasure_channel, random_channel
from qconverse.cli import run
from qconverse.fileio import (
    dumps_channel,
    dumps_operator,
    load_operator,
    loads_channel,
    loads_operator,
    save_channel,
    save_operator,
)
from qconverse.linalg import BipartiteOperator, maximally_entangled, random_bipartite_density, random_density


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("seed", range(5))
def test_operator_round_trip_is_bit_exact(seed):
    rho = random_bipartite_density(2, 3, seed)
    back = loads_operator(dumps_operator(rho))
    assert isinstance(back, BipartiteOperator)
    assert (back.dim_a, back.dim_b) == (2, 3)
    assert np.array_equal(back.op, rho.op)


def test_single_system_round_trip():
    rho = random_density(3, 7)
    back = loads_operator(dumps_operator(rho))
    assert isinstance(back, np.ndarray) and np.array_equal(back, rho)


def test_operator_text_uses_17_digits():
    doc = json.loads(dumps_operator(np.diag([1 / 3, 2 / 3])))
    assert doc["dims"] == [2]
    assert doc["entries"][0][0] == [float(format(1 / 3, ".17g")), 0.0]


def test_operator_dims_mismatch():
    text = dumps_operator(np.eye(2) / 2).replace('"dims": [2]', '"dims": [3]')
    with pytest.raises(ValueError):
        loads_operator(text)


def test_channel_round_trip():
    ch = random_channel(2, 3, 2, 4)
    back = loads_channel(dumps_channel(ch))
    assert (back.dim_in, back.dim_out) == (2, 3)
    assert all(np.array_equal(a, b) for a, b in zip(ch.kraus, back.kraus))


def test_channel_header_mismatch():
    text = dumps_channel(erasure_channel(2, 0.1)).replace('"dimOut": 3', '"dimOut": 4')
    with pytest.raises(ValueError):
        loads_channel(text)


def test_file_helpers(tmp_path):
    path = tmp_path / "phi.json"
    save_operator(path, maximally_entangled(2))
    assert np.array_equal(load_operator(path).op, maximally_entangled(2).op)
    assert b"\r" not in path.read_bytes()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, obj in [
        ("phi", maximally_entangled(2)),
        ("phi4", maximally_entangled(4)),
        ("rho", random_density(2, 1)),
        ("sigma", random_density(2, 2)),
        ("mixed", random_bipartite_density(2, 2, 3)),
    ]:
        paths[name] = str(tmp_path / f"{name}.json")
        save_operator(paths[name], obj)
    paths["erasure"] = str(tmp_path / "erasure.json")
    save_channel(paths["erasure"], erasure_channel(2, 0.25))
    paths["dir"] = tmp_path
    return paths


def test_cli_divergence(files):
    code, out, _ = call("divergence", "--rho", files["rho"], "--sigma", files["sigma"], "--lambda", "2")
    assert code == 0 and math.isfinite(float(out))
    code, out, _ = call("divergence", "--rho", files["rho"], "--sigma", files["sigma"], "--hockey", "--gamma", "1")
    assert code == 0 and 0 <= float(out) <= 1


def test_cli_divergence_needs_lambda(files):
    code, _, err = call("divergence", "--rho", files["rho"], "--sigma", files["sigma"])
    assert code == 2 and "--lambda" in err


def test_cli_k_lambda(files):
    code, out, _ = call("k-lambda", "--state", files["phi"], "--lambda", "2")
    assert code == 0
    assert math.isclose(float(out.split()[1]), math.log(2), rel_tol=1e-14)


def test_cli_k_lambda_numeric(files):
    code, out, _ = call("k-lambda", "--state", files["mixed"], "--lambda", "1.5", "--numeric", "--seed", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "# seed: 3"
    closed, numeric = float(lines[1].split()[1]), float(lines[2].split()[1])
    assert abs(closed - numeric) <= 1e-6


def test_cli_k_lambda_rejects_single_system(files):
    code, _, err = call("k-lambda", "--state", files["rho"], "--lambda", "2")
    assert code == 2 and "bipartite" in err


def test_cli_e0(files):
    code, out, _ = call("e0", "--channel", files["erasure"], "--input", files["phi"], "--s", "-0.5")
    assert code == 0
    assert abs(float(out) + math.log(0.75 * math.sqrt(2) + 0.25 / math.sqrt(2))) <= 1e-12


@pytest.mark.parametrize("n,state", [(1, "phi"), (2, "phi4")])
def test_cli_theorem1(files, n, state):
    code, out, _ = call(
        "theorem1", "--channel", files["erasure"], "--input", files[state],
        "--fidelity", repr(0.8125**n), "--rate-bits", "1", "--n", str(n), "--lambda", "2",
    )
    assert code == 0 and float(out) >= -1e-9


def test_cli_theorem1_constraint(files):
    code, _, err = call(
        "theorem1", "--channel", files["erasure"], "--input", files["phi"],
        "--fidelity", "0.1", "--rate", "0.1", "--n", "1", "--lambda", "2",
    )
    assert code == 2 and "ConstraintViolated" in err


def test_cli_erasure_curve_file(files):
    path = files["dir"] / "c.csv"
    argv = ["erasure-curve", "--p", "0.25", "--d", "2", "--rate", "0.45", "--n-max", "100", "--out", str(path)]
    assert call(*argv)[0] == 0
    first = path.read_bytes()
    assert call(*argv)[0] == 0
    assert path.read_bytes() == first
    lines = first.decode().splitlines()
    assert lines[0] == "sweep_var,s_star,exponent,fidelity_bound,method"
    assert len(lines) == 101
    last = lines[-1].split(",")
    assert last[0] == "100"
    assert float(last[3]) <= math.exp(-100 * 0.01198)


def test_cli_erasure_curve_both_stdout():
    code, out, _ = call("erasure-curve", "--p", "0.25", "--d", "2", "--rate", "0.45", "--n-max", "3", "--method", "both")
    assert code == 0
    assert [line.split(",")[-1] for line in out.splitlines()[1:]] == ["renyi", "hockey"] * 3


def test_cli_rate_bits_converts():
    _, a, _ = call("erasure-curve", "--p", "0.25", "--d", "2", "--rate-bits", "1", "--n-max", "2")
    _, b, _ = call("erasure-curve", "--p", "0.25", "--d", "2", "--rate", repr(math.log(2)), "--n-max", "2")
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["erasure-curve", "--p", "0.25", "--d", "2", "--n-max", "3"],
        ["erasure-curve", "--p", "0.25", "--d", "2", "--rate", "1", "--rate-bits", "1", "--n-max", "3"],
        ["erasure-curve", "--p", "0.25", "--d", "2", "--rate", "1", "--n-max", "0"],
        ["erasure-curve", "--p", "1.5", "--d", "2", "--rate", "1", "--n-max", "3"],
        ["e0", "--channel", "/nonexistent.json", "--input", "/nonexistent.json", "--s", "-0.1"],
        ["verify", "--suite", "nope"],
    ],
)
def test_cli_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 2
    assert err.startswith("qconverse: error:")
    assert out == ""


def test_cli_malformed_json(files):
    bad = files["dir"] / "bad.json"
    bad.write_text("{not json")
    code, _, err = call("k-lambda", "--state", str(bad), "--lambda", "2")
    assert code == 2 and "JSONDecodeError" in err


def test_cli_verify_mono_deterministic():
    a = call("verify", "--suite", "mono", "--seed", "5")
    b = call("verify", "--suite", "mono", "--seed", "5")
    assert a == b
    assert a[0] == 0
    assert a[1].splitlines()[0] == "# suite: mono seed: 5"
