import json
import math
from io import StringIO
from pathlib import Path

import pytest

from conftest import B211_LAMBDA
from src.cli import COMMAND_REGISTRY, parse_model, run
from src.config import get_settings
from src.errors import InvalidModel

MODELS = Path(__file__).resolve().parent.parent / "models"


def invoke(*argv):
    stdout = StringIO()
    code = run(list(argv), stdout=stdout)
    return code, stdout.getvalue()


def invoke_json(*argv):
    code, text = invoke(*argv)
    return code, json.loads(text)


def write_model(tmp_path, data, name="model.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


# ==========================================
# Commands
# ==========================================
def test_registry_names():
    assert set(COMMAND_REGISTRY) == {
        "spectral", "pressure", "gibbs", "entropy", "minmax",
        "bowen-root", "kms-measure", "kms-check", "convergence",
    }


def test_spectral_full_shift():
    code, envelope = invoke_json("spectral", "--model", str(MODELS / "f2_zero.json"))
    assert code == 0
    assert envelope["ok"] is True
    assert envelope["command"] == "spectral"
    outputs = envelope["outputs"]
    assert outputs["lambda"] == pytest.approx(2.0, rel=1e-12)
    assert outputs["log_lambda"] == pytest.approx(math.log(2), abs=1e-12)
    assert outputs["nu"] == pytest.approx([0.5, 0.5], abs=1e-12)
    assert outputs["gap"] == pytest.approx(0.0, abs=1e-12)
    assert envelope["diagnostics"]["residual_phi"] < 1e-10


def test_pressure_with_oracle():
    code, envelope = invoke_json("pressure", "--model", str(MODELS / "b211.json"), "--oracle")
    assert code == 0
    assert envelope["outputs"]["pressure"] == pytest.approx(math.log(B211_LAMBDA), abs=1e-12)
    assert envelope["outputs"]["difference"] < 1e-10


def test_pressure_of_a_depth_three_table():
    code, envelope = invoke_json("spectral", "--model", str(MODELS / "gm_depth3.json"))
    assert code == 0
    assert envelope["diagnostics"]["alphabet_size"] == 3
    assert envelope["diagnostics"]["block_depth"] == 3


def test_bowen_root_command():
    code, envelope = invoke_json("bowen-root", "--model", str(MODELS / "f2_H3.json"))
    assert code == 0
    assert envelope["outputs"]["beta"] == pytest.approx(math.log(2) / math.log(3), abs=1e-9)


def test_bowen_root_rejects_contracting_generator(tmp_path):
    model = write_model(tmp_path, {
        "alphabet_size": 2,
        "transitions": [[1, 1], [1, 1]],
        "potential": {"kind": "from_H", "H": 0.5, "beta": 1.0},
    })
    code, envelope = invoke_json("bowen-root", "--model", model)
    assert code == 3
    assert envelope["ok"] is False
    assert envelope["error"]["type"] == "HNotExpanding"


def test_gibbs_golden_mean():
    code, envelope = invoke_json("gibbs", "--model", str(MODELS / "gm_zero.json"), "--depth", "3")
    golden = (1 + math.sqrt(5)) / 2
    assert code == 0
    assert envelope["outputs"]["P"][0] == pytest.approx([1 / golden, golden ** -2], abs=1e-12)
    assert envelope["outputs"]["entropy"] == pytest.approx(math.log(golden), abs=1e-12)
    assert set(envelope["outputs"]["cylinders"]) == {"0,0,0", "0,0,1", "0,1,0", "1,0,0", "1,0,1"}


def test_gibbs_envelope_feeds_entropy(tmp_path):
    saved = tmp_path / "gibbs.json"
    code, gibbs = invoke_json("gibbs", "--model", str(MODELS / "b211.json"), "--out", str(saved))
    assert code == 0
    code, oracle = invoke_json(
        "entropy", "--model", str(MODELS / "b211.json"), "--measure", str(saved), "--method", "oracle",
    )
    assert code == 0
    assert oracle["outputs"]["entropy"] == pytest.approx(gibbs["outputs"]["entropy"], abs=1e-12)
    code, envelope = invoke_json(
        "entropy", "--model", str(MODELS / "b211.json"),
        "--measure", str(saved), "--method", "variational", "--oracle",
    )
    assert code == 0
    assert envelope["outputs"]["agrees"] is True
    assert envelope["outputs"]["difference"] < 1e-6
    assert envelope["diagnostics"]["gradient_error"] < 1e-5


def test_entropy_of_a_bare_measure_file(tmp_path):
    measure = tmp_path / "measure.json"
    measure.write_text(json.dumps({"p": [0.5, 0.5], "P": [[0.5, 0.5], [0.5, 0.5]]}), encoding="utf-8")
    code, envelope = invoke_json("entropy", "--model", str(MODELS / "f2_zero.json"), "--measure", str(measure))
    assert code == 0
    assert envelope["outputs"]["entropy"] == pytest.approx(math.log(2))


def test_kms_commands():
    code, envelope = invoke_json("kms-check", "--model", str(MODELS / "b211_kms.json"), "--n", "3")
    assert code == 0
    assert envelope["outputs"]["max_residual"] < 1e-9
    assert envelope["diagnostics"]["lambda"] == pytest.approx(1.0, abs=1e-9)

    # beta = 1 with H = e^-A: lambda = (3 + sqrt 5) / 2 and phi o L_rho != phi
    code, envelope = invoke_json("kms-check", "--model", str(MODELS / "b211.json"))
    assert code == 0
    assert envelope["diagnostics"]["lambda"] == pytest.approx(B211_LAMBDA, rel=1e-12)
    assert envelope["outputs"]["max_crossed_residual"] > 1e-3
    assert envelope["outputs"]["max_approx_residual"] < 1e-9

    code, envelope = invoke_json("kms-measure", "--model", str(MODELS / "f2_zero.json"))
    assert code == 0
    assert envelope["outputs"]["weights"] == pytest.approx([0.5, 0.5], abs=1e-12)
    assert envelope["diagnostics"]["probability"] is True


def test_convergence_command():
    code, envelope = invoke_json("convergence", "--model", str(MODELS / "gm_zero.json"), "--n", "15")
    golden = (1 + math.sqrt(5)) / 2
    assert code == 0
    assert len(envelope["outputs"]["errors"]) == 16
    assert envelope["outputs"]["gap"] == pytest.approx(golden ** -2, rel=1e-9)
    assert envelope["outputs"]["telescoping"]["equilibrium"] is True


def test_minmax_is_reproducible():
    args = ("minmax", "--model", str(MODELS / "f2_zero.json"), "--restarts", "2")
    code, first = invoke_json(*args)
    _, second = invoke_json(*args)
    assert code == 0
    assert first["outputs"]["value"] == pytest.approx(math.log(2), abs=1e-4)
    assert first["diagnostics"]["seed"] == 7
    first.pop("wall_time")
    second.pop("wall_time")
    assert first == second


# ==========================================
# Output formats
# ==========================================
def test_digest_depends_on_flags_only():
    _, plain = invoke_json("pressure", "--model", str(MODELS / "b211.json"))
    _, again = invoke_json("pressure", "--model", str(MODELS / "b211.json"))
    _, oracle = invoke_json("pressure", "--model", str(MODELS / "b211.json"), "--oracle")
    assert plain["inputs_digest"] == again["inputs_digest"]
    assert plain["inputs_digest"] != oracle["inputs_digest"]


def test_csv_format():
    code, text = invoke("pressure", "--model", str(MODELS / "b211.json"), "--format", "csv")
    lines = text.strip().splitlines()
    assert code == 0
    assert lines[0] == "field,value"
    assert lines[1].startswith("pressure,")
    assert float(lines[1].split(",")[1]) == pytest.approx(math.log(B211_LAMBDA), abs=1e-12)


def test_text_format():
    code, text = invoke("spectral", "--model", str(MODELS / "f2_zero.json"), "--format", "text")
    assert code == 0
    assert text.splitlines()[0].startswith("command")
    assert any(line.startswith("nu[0]") for line in text.splitlines())


def test_out_writes_the_json_envelope(tmp_path):
    target = tmp_path / "result.json"
    code, text = invoke("pressure", "--model", str(MODELS / "b211.json"), "--format", "text", "--out", str(target))
    assert code == 0
    saved = json.loads(target.read_text(encoding="utf-8"))
    assert saved["command"] == "pressure"
    assert "pressure" in text


# ==========================================
# Errors
# ==========================================
def test_unknown_command_exits_2():
    code, envelope = invoke_json("fly", "--model", str(MODELS / "b211.json"))
    assert code == 2
    assert envelope["error"]["type"] == "UnknownCommand"


def test_unknown_flag_exits_2():
    code, envelope = invoke_json("pressure", "--model", str(MODELS / "b211.json"), "--colour", "red")
    assert code == 2
    assert envelope["error"]["kind"] == "config"


def test_missing_model_file_exits_2(tmp_path):
    code, envelope = invoke_json("pressure", "--model", str(tmp_path / "missing.json"))
    assert code == 2
    assert envelope["error"]["type"] == "InvalidModel"


def test_malformed_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"alphabet_size": 2,\n "transitions": [[1, 1], [1, 1]\n}', encoding="utf-8")
    code, envelope = invoke_json("pressure", "--model", str(path))
    assert code == 2
    assert envelope["error"]["details"]["location"].startswith("line ")


def test_unknown_field_is_located(tmp_path):
    model = write_model(tmp_path, {
        "alphabet_size": 2,
        "transitions": [[1, 1], [1, 1]],
        "potential": {"kind": "constant", "value": 0.0, "colour": "red"},
    })
    code, envelope = invoke_json("pressure", "--model", model)
    assert code == 2
    assert envelope["error"]["details"]["location"] == "potential.colour"


def test_bad_transitions_are_located(tmp_path):
    model = write_model(tmp_path, {
        "alphabet_size": 2,
        "transitions": [[0, 0], [1, 1]],
        "potential": {"kind": "constant"},
    })
    code, envelope = invoke_json("pressure", "--model", model)
    assert code == 2
    assert envelope["error"]["details"]["location"] == "transitions[0]"


def test_non_primitive_exits_3(tmp_path):
    model = write_model(tmp_path, {
        "alphabet_size": 2,
        "transitions": [[0, 1], [1, 0]],
        "potential": {"kind": "constant"},
    })
    code, envelope = invoke_json("spectral", "--model", model)
    assert code == 3
    assert envelope["error"]["type"] == "NonPrimitive"


# ==========================================
# Model parsing
# ==========================================
def test_table_values_in_every_layout():
    base = {"alphabet_size": 2, "transitions": [[1, 1], [1, 0]]}
    flat = parse_model({**base, "potential": {"kind": "table", "values": [0.1, 0.2, 0.3]}})
    matrix = parse_model({**base, "potential": {"kind": "table", "values": [[0.1, 0.2], [0.3, 0.0]]}})
    mapping = parse_model({**base, "potential": {"kind": "table", "values": {"0,0": 0.1, "0,1": 0.2, "1,0": 0.3}}})
    for bundle in (flat, matrix, mapping):
        assert bundle.potential.log_weights.values.tolist() == pytest.approx([0.1, 0.2, 0.3])


def test_flat_values_of_no_depth_are_rejected():
    with pytest.raises(InvalidModel):
        parse_model({
            "alphabet_size": 2,
            "transitions": [[1, 1], [1, 0]],
            "potential": {"kind": "table", "values": [0.1, 0.2, 0.3, 0.4]},
        })


def test_kind_requires_its_fields():
    with pytest.raises(InvalidModel):
        parse_model({"alphabet_size": 2, "transitions": [[1, 1], [1, 1]], "potential": {"kind": "from_H"}})


def test_model_tolerances_override_settings(tmp_path):
    model = write_model(tmp_path, {
        "alphabet_size": 2,
        "transitions": [[1, 1], [1, 1]],
        "potential": {"kind": "constant"},
        "tolerances": {"entropy": 1e-7, "bowen": 1e-11},
    })
    code, _ = invoke("pressure", "--model", model)
    assert code == 0
    assert get_settings().entropy_tol == 1e-7
    assert get_settings().bowen_tol == 1e-11
    assert get_settings().spectral_tol == 1e-12


def test_kms_generator_defaults_to_the_potential():
    bundle = parse_model(json.loads((MODELS / "b211.json").read_text(encoding="utf-8")))
    H, beta = bundle.kms_generator()
    assert beta == 1.0
    assert H.as_matrix().tolist() == pytest.approx([[0.5, 1.0], [1.0, 1.0]])


def test_critical_beta_is_resolved_on_load():
    bundle = parse_model(json.loads((MODELS / "b211_kms.json").read_text(encoding="utf-8")))
    _, beta = bundle.kms_generator()
    # H = lambda_B / B, so rho = B / lambda_B at beta = 1
    assert beta == pytest.approx(1.0, abs=1e-9)


def test_critical_beta_needs_an_expanding_generator(tmp_path):
    model = write_model(tmp_path, {
        "alphabet_size": 2,
        "transitions": [[1, 1], [1, 1]],
        "potential": {"kind": "from_H", "H": [[0.5, 1.0], [1.0, 1.0]], "beta": "critical"},
    })
    code, envelope = invoke_json("kms-check", "--model", model)
    assert code == 3
    assert envelope["error"]["type"] == "HNotExpanding"


# ==========================================
# Golden envelopes
# ==========================================
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def assert_matches_golden(actual, expected, path="envelope"):
    """Exact keys, numbers within 1e-9; {"max": x} bounds a number, {"type": "int"} accepts any count"""
    if isinstance(expected, dict) and set(expected) == {"max"}:
        assert isinstance(actual, (int, float)) and actual <= expected["max"], path
    elif isinstance(expected, dict) and set(expected) == {"type"}:
        assert isinstance(actual, int) and not isinstance(actual, bool), path
    elif isinstance(expected, dict):
        assert isinstance(actual, dict) and set(actual) == set(expected), path
        for key, value in expected.items():
            assert_matches_golden(actual[key], value, f"{path}.{key}")
    elif isinstance(expected, list):
        assert isinstance(actual, list) and len(actual) == len(expected), path
        for i, (a, e) in enumerate(zip(actual, expected)):
            assert_matches_golden(a, e, f"{path}[{i}]")
    elif isinstance(expected, float):
        assert actual == pytest.approx(expected, rel=1e-9, abs=1e-9), path
    else:
        assert actual == expected, path


@pytest.mark.parametrize("command, model, golden", [
    ("spectral", "gm_zero.json", "spectral_gm_zero.json"),
    ("pressure", "b211.json", "pressure_b211.json"),
    ("bowen-root", "f2_H3.json", "bowen_root_f2_H3.json"),
])
def test_envelope_matches_golden(command, model, golden):
    code, envelope = invoke_json(command, "--model", str(MODELS / model))
    assert code == 0
    assert set(envelope) == {"ok", "command", "inputs_digest", "outputs", "diagnostics", "wall_time"}
    assert len(envelope["inputs_digest"]) == 64
    assert envelope["wall_time"] >= 0.0
    expected = json.loads((GOLDEN_DIR / golden).read_text(encoding="utf-8"))
    stable = {key: envelope[key] for key in expected}
    assert_matches_golden(stable, expected)
