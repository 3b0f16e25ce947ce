"""Loaders for the simulator's CSV/JSON artifacts.

Every file the simulator writes opens with a `# config_hash=` comment and
is listed in a per-preset manifest; loaders here refuse anything that
lacks the hash or disagrees with the manifest, so a figure can never mix
outputs from different configurations.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

HASH_PREFIX = "# config_hash="


class DataError(Exception):
    """Missing, malformed, or inconsistent input data."""


@dataclass(frozen=True)
class Table:
    """Column-oriented sweep data plus the hash it was produced under."""

    columns: tuple[str, ...]
    rows: np.ndarray
    config_hash: str
    notes: dict

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise DataError(f"column {name!r} not in table (has {self.columns})")
        return self.rows[:, self.columns.index(name)]


@dataclass(frozen=True)
class QGrid:
    """Husimi samples on a cell-centered (theta, phi) grid."""

    values: np.ndarray
    q_max: float
    normalized: bool
    n_atoms: int
    config_hash: str

    @property
    def thetas(self) -> np.ndarray:
        n = self.values.shape[0]
        return (np.arange(n) + 0.5) * np.pi / n

    @property
    def phis(self) -> np.ndarray:
        n = self.values.shape[1]
        return (np.arange(n) + 0.5) * 2.0 * np.pi / n


def _read_hash_line(path: str, line: str) -> str:
    if not line.startswith(HASH_PREFIX):
        raise DataError(f"{path}: missing config hash header")
    return line[len(HASH_PREFIX):].strip()


def load_manifest(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        raise DataError(f"manifest not found: {path}")
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON ({exc})")
    if "config_hash" not in manifest:
        raise DataError(f"{path}: manifest lacks a config hash")
    if "outputs" not in manifest:
        raise DataError(f"{path}: manifest lacks an outputs listing")
    return manifest


def load_table(path: str, notes: dict | None = None) -> Table:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataError(f"{path}: empty file")
    cfg_hash = _read_hash_line(path, lines[0])
    if len(lines) < 2:
        raise DataError(f"{path}: no header row")
    columns = tuple(lines[1].split(","))
    body = [line for line in lines[2:] if line]
    if not body:
        raise DataError(f"{path}: table has no data rows")
    rows = np.array([[float(x) for x in line.split(",")] for line in body])
    if rows.shape[1] != len(columns):
        raise DataError(f"{path}: row width {rows.shape[1]} != {len(columns)} columns")
    return Table(columns, rows, cfg_hash, dict(notes or {}))


def load_qgrid(path: str) -> QGrid:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataError(f"{path}: empty file")
    cfg_hash = _read_hash_line(path, lines[0])
    if len(lines) < 2 or not lines[1].startswith("# "):
        raise DataError(f"{path}: missing grid metadata line")
    meta = dict(item.split("=", 1) for item in lines[1][2:].split(","))
    body = [line for line in lines[2:] if line]
    if not body:
        raise DataError(f"{path}: grid has no data rows")
    values = np.array([[float(x) for x in line.split(",")] for line in body])
    expect = (int(meta["n_theta"]), int(meta["n_phi"]))
    if values.shape != expect:
        raise DataError(f"{path}: grid shape {values.shape} != declared {expect}")
    return QGrid(values, float(meta["q_max"]), meta["normalized"] == "1",
                 int(meta["n_atoms"]), cfg_hash)


def load_summary(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "config_hash" not in data:
        raise DataError(f"{path}: summary lacks a config hash")
    return data


_LOADERS = {"table": load_table, "qgrid": load_qgrid, "summary": load_summary}


def load_preset_outputs(in_dir: str, preset: str) -> dict:
    """Load every artifact a preset wrote, verifying hash agreement.

    Returns {key: Table | QGrid | dict} plus "_manifest".
    """
    manifest = load_manifest(os.path.join(in_dir, f"{preset}_manifest.json"))
    cfg_hash = manifest["config_hash"]
    loaded: dict = {"_manifest": manifest}
    for key, entry in manifest["outputs"].items():
        path = os.path.join(in_dir, entry["file"])
        kind = entry.get("kind")
        if kind not in _LOADERS:
            raise DataError(f"{path}: unknown artifact kind {kind!r}")
        if kind == "table":
            item = load_table(path, entry.get("notes"))
        else:
            item = _LOADERS[kind](path)
        item_hash = item["config_hash"] if isinstance(item, dict) else item.config_hash
        if item_hash != cfg_hash:
            raise DataError(f"{path}: hash {item_hash} disagrees with manifest "
                            f"{cfg_hash}")
        loaded[key] = item
    return loaded
