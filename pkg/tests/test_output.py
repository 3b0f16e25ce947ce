import json

import numpy as np
import pytest

from tntsim.optimize import SweepResult
from tntsim.output import canonical_json, config_hash, write_artifacts


def _table():
    rows = np.array([[0.0, 1.5], [0.1, 2.5]])
    return SweepResult("demo", ("x", "y"), rows, {"flag": True})


def test_config_hash_is_stable_and_sensitive():
    cfg = {"n_atoms": 20, "t1": 0.027}
    h1 = config_hash("fig1", cfg)
    h2 = config_hash("fig1", {"t1": 0.027, "n_atoms": 20})
    assert h1 == h2 and len(h1) == 16
    assert int(h1, 16) >= 0
    assert config_hash("fig1", {"n_atoms": 21, "t1": 0.027}) != h1
    assert config_hash("fig2", cfg) != h1


def test_canonical_json_sorts_keys():
    assert canonical_json({"b": 1, "a": np.float64(2.0)}) == '{"a":2.0,"b":1}'
    assert canonical_json({"v": np.array([1, 2])}) == '{"v":[1,2]}'


def test_written_files_share_hash_and_format(tmp_path):
    out = tmp_path / "arts"
    paths = write_artifacts(str(out), "demo", {"curve": _table(), "meta": {"k": 1}},
                            "demo", {"a": 1}, "1.0.0")
    names = {p.split("/")[-1] for p in paths}
    assert names == {"demo_curve.csv", "demo_meta.json", "demo_manifest.json"}
    h = config_hash("demo", {"a": 1})
    lines = (out / "demo_curve.csv").read_text().splitlines()
    assert lines[0] == f"# config_hash={h}"
    assert lines[1] == "x,y"
    assert lines[2] == "0.000000000000e+00,1.500000000000e+00"
    manifest = json.loads((out / "demo_manifest.json").read_text())
    assert manifest["config_hash"] == h
    assert manifest["version"] == "1.0.0"
    assert set(manifest["outputs"]) == {"curve", "meta"}


def test_failed_write_leaves_no_partial_outputs(tmp_path):
    out = tmp_path / "arts"
    with pytest.raises(TypeError):
        write_artifacts(str(out), "demo", {"curve": _table(), "bad": object()},
                        "demo", {}, "1.0.0")
    leftovers = list(out.glob("*")) if out.exists() else []
    assert leftovers == []


def test_json_format_round_trips_table(tmp_path):
    out = tmp_path / "arts"
    write_artifacts(str(out), "demo", {"curve": _table()}, "demo", {}, "1.0.0",
                    fmt="json")
    data = json.loads((out / "demo_curve.json").read_text())
    assert data["columns"] == ["x", "y"]
    assert data["rows"] == [[0.0, 1.5], [0.1, 2.5]]
    assert data["notes"] == {"flag": True}
