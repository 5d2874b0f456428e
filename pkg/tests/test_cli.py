import json
import os

import numpy as np
import pytest

from ptgeom.cli import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_VALIDATION,
    canonical_json,
    main,
    sweep,
    validate_scenario,
)
from ptgeom.errors import ValidationError

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")


def spin_config(tmp_path, steps=600, outputs=None, tol=None):
    cfg = {
        "spec_version": 1,
        "model": {"name": "standard_qm", "cap_theta": 0.9},
        "path": {"type": "circle", "duration": 2.0},
        "run": {"steps": steps, "tolerances": tol or {"phase": 1e-6, "unitarity": 1e-8}},
        "outputs": outputs if outputs is not None else [
            {"kind": "phases", "path": "phases.json", "format": "json"}
        ],
    }
    p = tmp_path / "spin.json"
    p.write_text(json.dumps(cfg))
    return str(p)


# --- canonical serialization -------------------------------------------------

def test_canonical_json_is_deterministic_and_sorted():
    doc = {"b": 1.0 / 3.0, "a": [1, 2.5, None, True], "c": {"y": -0.0, "x": "s"}}
    text = canonical_json(doc)
    assert text == canonical_json(json.loads(json.dumps(doc)))
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    parsed = json.loads(text)
    assert parsed["b"] == pytest.approx(1.0 / 3.0, abs=0)


def test_canonical_json_17_digits():
    assert "0.10000000000000001" in canonical_json({"x": 0.1})


# --- validation ----------------------------------------------------------------

def test_validate_rejects_wrong_version():
    with pytest.raises(ValidationError, match="spec_version"):
        validate_scenario({"spec_version": 2, "model": {}, "path": {}, "run": {}})


def test_validate_rejects_unknown_model():
    with pytest.raises(ValidationError, match="model.name"):
        validate_scenario(
            {"spec_version": 1, "model": {"name": "nope"}, "path": {}, "run": {"steps": 10}}
        )


def test_validate_rejects_nonpositive_tolerance():
    with pytest.raises(ValidationError, match="positive"):
        validate_scenario(
            {
                "spec_version": 1,
                "model": {"name": "standard_qm"},
                "path": {"duration": 2.0},
                "run": {"steps": 10, "tolerances": {"phase": 0.0}},
            }
        )


def test_validate_rejects_tensor_output_for_two_level():
    with pytest.raises(ValidationError, match="section"):
        validate_scenario(
            {
                "spec_version": 1,
                "model": {"name": "two_level"},
                "path": {"type": "circle", "duration": 6.0},
                "run": {"steps": 10},
                "outputs": [{"kind": "tensor_grid", "path": "x.csv", "format": "csv"}],
            }
        )


def test_bundled_configs_validate():
    for name in ("oscillator.json", "two_level.json", "standard_qm.json"):
        code = main(["validate", os.path.join(CONFIG_DIR, name)])
        assert code == EXIT_OK


# --- exit codes ------------------------------------------------------------------

def test_malformed_config_exit_2_no_outputs(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    out_dir = tmp_path / "out"
    out_dir.mkdir()
    code = main(["--out-dir", str(out_dir), "run", str(bad)])
    assert code == EXIT_PARSE
    assert list(out_dir.iterdir()) == []


def test_validation_error_exit_3(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"spec_version": 1, "model": {"name": "nope"},
                               "path": {}, "run": {"steps": 10}}))
    assert main(["run", str(cfg)]) == EXIT_VALIDATION


def test_run_spin_scenario_ok(tmp_path):
    cfg = spin_config(tmp_path)
    code = main(["--out-dir", str(tmp_path), "run", cfg])
    assert code == EXIT_OK
    doc = json.loads((tmp_path / "phases.json").read_text())
    assert abs(abs(doc["gamma"]) - np.pi) < 1e-6


def test_run_numerical_failure_exit_4(tmp_path):
    # impossible tolerance forces residual failures but outputs still land
    cfg = spin_config(tmp_path, tol={"phase": 1e-30, "unitarity": 1e-8})
    code = main(["--out-dir", str(tmp_path), "run", cfg])
    assert code == EXIT_NUMERICAL
    assert (tmp_path / "phases.json").exists()


def test_run_is_byte_deterministic(tmp_path):
    cfg = spin_config(tmp_path)
    d1, d2 = tmp_path / "a", tmp_path / "b"
    d1.mkdir(), d2.mkdir()
    assert main(["--out-dir", str(d1), "run", cfg]) == EXIT_OK
    assert main(["--out-dir", str(d2), "run", cfg]) == EXIT_OK
    assert (d1 / "phases.json").read_bytes() == (d2 / "phases.json").read_bytes()


# --- sweep -------------------------------------------------------------------

def test_sweep_empty_values(tmp_path):
    cfg_path = spin_config(tmp_path)
    cfg = json.loads(open(cfg_path).read())
    rows, code = sweep(cfg, "path.duration", [], out_path=str(tmp_path / "table.csv"))
    assert rows == [] and code == EXIT_OK


def test_sweep_unknown_parameter(tmp_path):
    cfg = json.loads(open(spin_config(tmp_path)).read())
    with pytest.raises(ValidationError, match="does not resolve"):
        sweep(cfg, "model.not_there.x", [1.0])


def test_sweep_area_law(tmp_path):
    cfg = {
        "spec_version": 1,
        "model": {"name": "oscillator", "picture": "pt", "truncation": 40},
        "path": {"type": "circle", "radius": 0.1, "rate": 1.0},
        "run": {"steps": 700, "tolerances": {"phase": 1e-4}},
        "outputs": [],
    }
    values = [0.1, 0.2, 0.3]
    rows, code = sweep(cfg, "path.radius", values, out_path=str(tmp_path / "sweep.csv"))
    assert code == EXIT_OK
    for row, r in zip(rows, values):
        assert abs(row["gamma"] - (-2 * np.pi * r * r)) < 1e-4
    header = (tmp_path / "sweep.csv").read_text().splitlines()[0].split(",")
    assert "gamma_kinematic" in header and "gw_beta" in header


def test_sweep_steps_convergence(tmp_path):
    # route disagreement shrinks under step doubling (measured ~2nd order,
    # set by the ordered-product route; the stencil routes converge faster)
    cfg = {
        "spec_version": 1,
        "model": {"name": "two_level", "s": 1.0, "gamma": 0.4},
        "path": {"type": "circle", "radius": 0.25, "radius_phi": 0.9, "duration": 6.0},
        "run": {"steps": 400, "tolerances": {"phase": 1e-2}},
        "outputs": [],
    }
    rows, _ = sweep(cfg, "run.steps", [400, 800, 1600])
    spreads = []
    for row in rows:
        routes = [v for k, v in row.items() if k.startswith("gamma_")]
        spreads.append(max(routes) - min(routes))
    assert spreads[0] / spreads[1] > 3.0
    assert spreads[1] / spreads[2] > 3.0
