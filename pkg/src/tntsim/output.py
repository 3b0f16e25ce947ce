"""Deterministic serialization of sweep tables, Q-grids, and summaries.

Every output file embeds a hash of the resolved configuration so plots and
regression baselines can refuse mismatched inputs.  No timestamps anywhere:
identical configs reproduce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .husimi import QGrid
from .optimize import SweepResult

FLOAT_FMT = "%.12e"


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON-serializable: {type(obj)!r}")


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), default=_jsonable)


def config_hash(preset: str, config: dict) -> str:
    """Short stable digest of the resolved run configuration."""
    payload = canonical_json({"preset": preset, "config": config})
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def write_table_csv(path: str, table: SweepResult, cfg_hash: str) -> None:
    lines = [f"# config_hash={cfg_hash}", ",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(FLOAT_FMT % v for v in row))
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def write_qgrid_csv(path: str, grid: QGrid, cfg_hash: str) -> None:
    header = (f"# n_theta={grid.n_theta},n_phi={grid.n_phi},"
              f"normalized={int(grid.normalized)},q_max={FLOAT_FMT % grid.q_max},"
              f"n_atoms={grid.system.n_atoms}")
    lines = [f"# config_hash={cfg_hash}", header]
    for row in grid.values:
        lines.append(",".join(FLOAT_FMT % v for v in row))
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def write_json(path: str, data: dict, cfg_hash: str) -> None:
    payload = {"config_hash": cfg_hash}
    payload.update(data)
    with open(path, "w", newline="\n") as f:
        json.dump(payload, f, sort_keys=True, indent=2, default=_jsonable)
        f.write("\n")


def _table_as_json(table: SweepResult) -> dict:
    return {"label": table.label, "columns": list(table.columns),
            "rows": table.rows.tolist(), "notes": table.notes}


def _qgrid_as_json(grid: QGrid) -> dict:
    return {"n_theta": grid.n_theta, "n_phi": grid.n_phi,
            "normalized": grid.normalized, "q_max": grid.q_max,
            "n_atoms": grid.system.n_atoms, "values": grid.values.tolist()}


@dataclass
class OutputTracker:
    """Collects written paths; removes them all if the run fails midway."""

    paths: list[str] = field(default_factory=list)

    def add(self, path: str) -> str:
        self.paths.append(path)
        return path

    def discard_all(self) -> None:
        for p in self.paths:
            try:
                os.remove(p)
            except OSError:
                pass
        self.paths.clear()


def write_artifacts(out_dir: str, name: str, artifacts: dict, preset: str,
                    config: dict, version: str, fmt: str = "csv") -> list[str]:
    """Serialize a preset's artifact dict plus a manifest; returns the paths.

    Tables and Q-grids become CSV (or JSON under fmt="json"); plain dicts
    are always JSON.  On any error every file written so far is removed.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown output format {fmt!r}")
    os.makedirs(out_dir, exist_ok=True)
    h = config_hash(preset, config)
    tracker = OutputTracker()
    manifest_entries: dict[str, dict] = {}
    try:
        for key in sorted(artifacts):
            item = artifacts[key]
            if isinstance(item, SweepResult):
                if fmt == "csv":
                    fname = f"{name}_{key}.csv"
                    write_table_csv(tracker.add(os.path.join(out_dir, fname)), item, h)
                else:
                    fname = f"{name}_{key}.json"
                    write_json(tracker.add(os.path.join(out_dir, fname)),
                               _table_as_json(item), h)
                entry = {"file": fname, "kind": "table", "notes": item.notes}
            elif isinstance(item, QGrid):
                if fmt == "csv":
                    fname = f"{name}_{key}.csv"
                    write_qgrid_csv(tracker.add(os.path.join(out_dir, fname)), item, h)
                else:
                    fname = f"{name}_{key}.json"
                    write_json(tracker.add(os.path.join(out_dir, fname)),
                               _qgrid_as_json(item), h)
                entry = {"file": fname, "kind": "qgrid",
                         "notes": {"q_max": item.q_max}}
            elif isinstance(item, dict):
                fname = f"{name}_{key}.json"
                write_json(tracker.add(os.path.join(out_dir, fname)), item, h)
                entry = {"file": fname, "kind": "summary", "notes": {}}
            else:
                raise TypeError(f"cannot serialize artifact {key!r}: {type(item)!r}")
            manifest_entries[key] = entry
        manifest = {"name": name, "preset": preset, "version": version,
                    "config": config, "config_hash": h,
                    "outputs": manifest_entries}
        write_json(tracker.add(os.path.join(out_dir, f"{name}_manifest.json")),
                   manifest, h)
    except Exception:
        tracker.discard_all()
        raise
    return tracker.paths
