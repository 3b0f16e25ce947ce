"""Generate reduced-size preset outputs once per session via the simulator CLI.

The renderer is exercised only against files the `tntsim` command wrote,
never against in-process objects, so these tests double as a check of the
cross-package file contract.
"""

import shutil
import subprocess
import sys

import pytest

REDUCED = {
    "fig1": ["--N", "20", "--set", "scan_step=0.004",
             "--set", "q_theta=18", "--set", "q_phi=36"],
    "fig2": ["--N", "20", "--set", "scan_step=0.01"],
    "fig3": ["--N", "20", "--set", "q_theta=18", "--set", "q_phi=36"],
    "fig4": ["--N", "20", "--set", "sigma_values=[0.5, 2.0, 4.0, 8.0]",
             "--set", "ratio_step=1.0"],
    "fig5": ["--N", "20", "--set", "ratio_step=0.5"],
    "fig6": ["--N", "20", "--set", "t1_step=0.013"],
}


def _tntsim():
    exe = shutil.which("tntsim")
    if exe is not None:
        return [exe]
    return [sys.executable, "-m", "tntsim.cli"]


@pytest.fixture(scope="session")
def preset_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("presets")
    for preset, overrides in REDUCED.items():
        cmd = [*_tntsim(), "fig", preset, "--out", str(root / preset),
               "--threads", "2", *overrides]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, f"{preset} generation failed: {proc.stderr}"
    return root
