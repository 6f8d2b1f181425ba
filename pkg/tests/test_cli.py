"""Command-line surface: config parsing, output formats, exit codes."""

import json

import pytest

from otcohom.cli import canonical_json, main, parse_config
from otcohom.errors import ConfigError, UnknownPreset
from otcohom.presets import get_preset


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- presets ----------------------------------------------------------------

def test_presets_listing(capsys):
    code, out, err = run(capsys, ["presets"])
    assert code == 0
    assert "inoue-cubic" in out and "quartic-s2" in out
    assert err == ""


def test_presets_json(capsys):
    code, out, _ = run(capsys, ["presets", "--format", "json"])
    assert code == 0
    records = json.loads(out)
    assert [r["name"] for r in records] == ["inoue-cubic", "quartic-s2"]
    assert records[0]["polynomial"] == [-1, -1, 0, 1]
    assert (records[0]["s"], records[0]["t"]) == (1, 1)


def test_get_preset_unknown_names_available():
    with pytest.raises(UnknownPreset) as exc:
        get_preset("nope")
    assert "inoue-cubic" in str(exc.value)
    assert "quartic-s2" in str(exc.value)


# --- compute ----------------------------------------------------------------

def test_compute_json_golden(capsys):
    code, out, err = run(
        capsys, ["compute", "--preset", "inoue-cubic", "--format", "json"]
    )
    assert code == 0
    assert err == ""
    doc = json.loads(out)
    assert doc["betti"] == [1, 1, 0, 1, 1]
    assert doc["hodge"] == [[1, 1, 0], [0, 0, 0], [0, 1, 1]]
    assert doc["bott_chern"] == [[1, 0, 0], [0, 1, 1], [0, 1, 1]]
    assert doc["checks"]["frolicher"] is True
    assert doc["checks"]["at_failure_set"] == [2]


def test_compute_output_is_byte_deterministic(capsys):
    argv = ["compute", "--preset", "quartic-s2", "--format", "json"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second


def test_compute_json_round_trips(capsys):
    _, out, _ = run(
        capsys, ["compute", "--preset", "quartic-s2", "--format", "json"]
    )
    assert canonical_json(json.loads(out)) == out


def test_compute_table_format(capsys):
    code, out, _ = run(capsys, ["compute", "--preset", "inoue-cubic"])
    assert code == 0
    assert "betti" in out
    assert "hodge" in out
    assert "bott_chern" in out
    assert "frolicher" in out


def test_compute_from_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "field": {"polynomial": [-1, -1, 0, 1]},
        "units": [[0, 1, 0]],
        "output": "json",
    }))
    code, out, _ = run(capsys, ["compute", "--config", str(cfg)])
    assert code == 0
    _, preset_out, _ = run(
        capsys, ["compute", "--preset", "inoue-cubic", "--format", "json"]
    )
    assert out == preset_out


def test_compute_accepts_string_integers(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "field": {"polynomial": ["-1", "-1", "0", "1"]},
        "units": [["0", "1", "0"]],
        "precision_bits": "128",
        "output": "json",
    }))
    code, out, _ = run(capsys, ["compute", "--config", str(cfg)])
    assert code == 0
    assert json.loads(out)["betti"] == [1, 1, 0, 1, 1]


def test_compute_subset(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "preset": "inoue-cubic",
        "compute": ["betti"],
        "output": "json",
    }))
    code, out, _ = run(capsys, ["compute", "--config", str(cfg)])
    assert code == 0
    doc = json.loads(out)
    assert doc["betti"] == [1, 1, 0, 1, 1]
    assert doc["hodge"] is None and doc["bott_chern"] is None


# --- config validation ------------------------------------------------------

def _write(tmp_path, doc):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(doc))
    return str(p)


def test_missing_units_is_config_error(tmp_path, capsys):
    path = _write(tmp_path, {"field": {"polynomial": [-1, -1, 0, 1]}})
    code, _, err = run(capsys, ["compute", "--config", path])
    assert code == 2
    record = json.loads(err)
    assert record["exit_code"] == 2
    assert "units" in record["message"]


def test_unknown_key_rejected(tmp_path, capsys):
    path = _write(tmp_path, {
        "field": {"polynomial": [-1, -1, 0, 1]}, "units": [[0, 1, 0]],
        "speed": "fast",
    })
    code, _, err = run(capsys, ["compute", "--config", path])
    assert code == 2


def test_preset_and_field_conflict(tmp_path, capsys):
    path = _write(tmp_path, {
        "preset": "inoue-cubic", "field": {"polynomial": [-1, -1, 0, 1]},
        "units": [[0, 1, 0]],
    })
    code, _, _ = run(capsys, ["compute", "--config", path])
    assert code == 2


def test_unknown_preset_exit_code(capsys):
    code, _, err = run(capsys, ["compute", "--preset", "missing"])
    assert code == 2
    record = json.loads(err)
    assert "inoue-cubic" in record["message"]


def test_precision_cap_below_bits_rejected(tmp_path, capsys):
    path = _write(tmp_path, {
        "preset": "inoue-cubic", "precision_bits": 256, "precision_cap": 64,
    })
    code, _, _ = run(capsys, ["compute", "--config", path])
    assert code == 2


def test_parse_config_rejects_bool_masquerading_as_int():
    with pytest.raises(ConfigError):
        parse_config({"preset": "inoue-cubic", "precision_bits": True})


def test_parse_config_canonical_compute_order():
    cfg = parse_config({
        "preset": "inoue-cubic",
        "compute": ["checks", "betti"],
    })
    assert cfg.compute == ("betti", "checks")
    with pytest.raises(ConfigError):
        parse_config({"preset": "inoue-cubic", "compute": ["nope"]})


# --- verify -----------------------------------------------------------------

def test_verify_presets_pass(capsys):
    for name in ("inoue-cubic", "quartic-s2"):
        code, out, err = run(capsys, ["verify", "--preset", name])
        assert code == 0, (name, out, err)
        assert "FAIL" not in out
        assert "result: all checks passed" in out
        assert "golden_tables" in out


def test_verify_json_lists_all_checks(capsys):
    code, out, _ = run(
        capsys, ["verify", "--preset", "inoue-cubic", "--format", "json"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert set(doc["checks"]) == {
        "d_squared",
        "star_closure",
        "formality",
        "frolicher",
        "backend_agreement",
        "branch_invariance",
        "duality",
        "golden_tables",
    }
    assert all(v == "pass" for v in doc["checks"].values())


def test_verify_truncated_precision_exits_3(tmp_path, capsys):
    path = _write(tmp_path, {
        "preset": "inoue-cubic", "precision_bits": 8, "precision_cap": 8,
    })
    code, out, _ = run(capsys, ["verify", "--config", path])
    assert code == 3
    assert "FAIL" in out


def test_error_record_names_module_and_operation(capsys):
    code, _, err = run(capsys, ["compute", "--preset", "missing"])
    assert code == 2
    record = json.loads(err)
    assert record["error"] == "UnknownPreset"
    assert record["module"] == "presets"
    assert record["operation"] == "get_preset"


# --- flag overrides ---------------------------------------------------------

def test_precision_flag_override(tmp_path, capsys):
    # absurdly low cap via file, rescued by the command-line override
    path = _write(tmp_path, {
        "preset": "inoue-cubic", "precision_bits": 16, "precision_cap": 4096,
        "output": "json",
    })
    code, out, _ = run(
        capsys, ["compute", "--config", path, "--precision", "160"]
    )
    assert code == 0
    assert json.loads(out)["betti"] == [1, 1, 0, 1, 1]


def test_canonical_json_shape():
    text = canonical_json({"b": 1, "a": [1, 2]})
    assert text == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
