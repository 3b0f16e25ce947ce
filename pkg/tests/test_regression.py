"""Frozen baselines for the preset curve shapes.

The values here were produced by this implementation on its first verified
run and guard against silent numerical drift; they are not externally
sourced targets.  Grid-point results (argmax locations) are pinned exactly,
continuous values to a relative 1e-3.
"""

import numpy as np
import pytest

from tntsim.presets import (
    Fig1Config,
    Fig2Config,
    Fig3Config,
    Fig4Config,
    Fig5Config,
    Fig6Config,
    run_fig1,
    run_fig2,
    run_fig3,
    run_fig4,
    run_fig5,
    run_fig6,
)

REL = 1e-3


@pytest.fixture(scope="module")
def fig1():
    return run_fig1(Fig1Config(), threads=2)


@pytest.fixture(scope="module")
def fig4():
    return run_fig4(Fig4Config(), threads=4)


def test_fig1_curve_pins(fig1):
    c = fig1["curves"]
    i = int(np.argmax(c.column("fq_tnt")))
    assert c.column("chi_t")[i] == 0.0715
    assert c.column("fq_tnt")[i] == pytest.approx(6507.7916, rel=REL)
    assert c.column("fq_oat").max() == pytest.approx(3737.4590, rel=REL)
    assert c.notes["snl"] == 100.0
    assert c.notes["heisenberg"] == 10000.0
    gain = c.column("gain_tnt")
    j = int(np.argmax(gain))
    assert c.column("chi_t")[j] == 0.027
    assert gain[j] == pytest.approx(9.7339, rel=REL)
    jo = int(np.argmax(c.column("gain_oat")))
    assert c.column("chi_t")[jo] == 0.0505
    assert c.column("gain_oat")[jo] == pytest.approx(15.8862, rel=REL)


def test_fig1_phase_space_frames(fig1):
    q_max = [fig1[k].q_max for k in ("q0", "q1", "q2", "q3")]
    assert q_max == pytest.approx([0.984885, 0.555764, 0.180940, 0.120337], rel=REL)
    assert all(a > b for a, b in zip(q_max, q_max[1:]))
    assert fig1["q0"].values.shape == (90, 180)


def test_fig2_curve_pins():
    c = run_fig2(Fig2Config(), threads=2)["curves"]
    chi = c.column("chi_t")

    def peak(name):
        col = c.column(name)
        j = int(np.argmax(col))
        return float(chi[j]), float(col[j])

    assert peak("qfi") == (0.072, pytest.approx(6507.0103, rel=REL))
    assert peak("fc_none_0.1") == (0.072, pytest.approx(6507.0101, rel=REL))
    assert peak("fc_echo_0.1") == (0.072, pytest.approx(6507.0055, rel=REL))
    assert peak("fc_echo_1") == (0.1, pytest.approx(1794.7432, rel=REL))
    assert peak("fc_echo_5") == (0.1, pytest.approx(248.4006, rel=REL))
    # without an echo, sigma >= 1 blur erases the signal in the fixed basis
    assert c.column("fc_none_1").max() < 0.01
    assert c.column("fc_none_5").max() < 0.01


def test_fig3_distance_pins():
    arts = run_fig3(Fig3Config(q_theta=6, q_phi=6))
    d = arts["hellinger"]
    assert d["d2_ideal_trivial"] == pytest.approx(0.397971, rel=REL)
    assert d["d2_ideal_echo"] == pytest.approx(0.398196, rel=REL)
    assert d["d2_blurred_trivial"] == pytest.approx(9.02e-4, rel=1e-2)
    assert d["d2_blurred_echo"] == pytest.approx(0.111798, rel=REL)
    maxima = {k: (float(arts[k].column("p_ideal").max()),
                  float(arts[k].column("p_blurred").max()))
              for k in ("p0", "p1", "p2", "p3")}
    assert maxima["p0"] == pytest.approx((0.358204, 0.158242), rel=REL)
    assert maxima["p1"] == pytest.approx((0.248191, 0.144698), rel=REL)
    assert maxima["p2"] == pytest.approx((1.0, 0.570348), rel=REL)
    assert maxima["p3"] == pytest.approx((0.419597, 0.314938), rel=REL)
    for k in ("p0", "p1", "p2", "p3"):
        assert arts[k].column("p_ideal").sum() == pytest.approx(1.0, abs=1e-10)
        assert arts[k].column("p_blurred").sum() == pytest.approx(1.0, abs=1e-10)


def test_fig4_crossing_pins(fig4):
    a, b = fig4["panel_a"].notes, fig4["panel_b"].notes
    assert a["sigma_star_none"] == pytest.approx(4.5294, rel=REL)
    assert a["sigma_star_echo"] == pytest.approx(16.7159, rel=REL)
    assert a["sigma_star_pseudo_echo"] == pytest.approx(0.9631, rel=REL)
    assert b["sigma_star_none"] == pytest.approx(1.2654, rel=REL)
    assert b["sigma_star_echo"] == pytest.approx(27.4845, rel=REL)
    assert b["sigma_star_pseudo_echo"] == pytest.approx(14.4686, rel=REL)
    # the asymmetric echo stays above shot noise across the scanned window
    assert "sigma_star_asymmetric_echo" not in a
    assert "sigma_star_asymmetric_echo" not in b
    assert a["qfi_prepared"] == pytest.approx(1259.7597, rel=REL)
    assert b["qfi_prepared"] == pytest.approx(6507.0103, rel=REL)


def test_fig4_panel_shape(fig4):
    for key in ("panel_a", "panel_b"):
        panel = fig4[key]
        assert panel.columns == ("sigma", "fc_trivial", "fc_echo", "fc_asym",
                                 "fc_pseudo", "qcrb", "snl")
        fc_asym = panel.column("fc_asym")
        # the optimized asymmetric echo dominates the plain echo everywhere
        assert np.all(fc_asym >= panel.column("fc_echo") - 1e-6)


def test_fig5_note_pins():
    arts = run_fig5(Fig5Config(), threads=2)
    a, b = arts["panel_a"].notes, arts["panel_b"].notes
    assert (a["t1"], b["t1"]) == (0.027, 0.072)
    assert a["argmax_ratio_0.1"] == 0.9
    assert a["argmax_ratio_5"] == 2.9
    assert b["argmax_ratio_0.1"] == 0.6
    assert b["argmax_ratio_5"] == 1.6
    assert a["qfi_prepared"] == pytest.approx(1259.7597, rel=REL)
    assert b["qfi_prepared"] == pytest.approx(6507.0103, rel=REL)


def test_fig6_note_pins():
    sweep = run_fig6(Fig6Config(), threads=2)["sweep"]
    assert sweep.notes["argmax_t1_0.1"] == 0.07
    assert sweep.notes["argmax_t1_1"] == 0.055
    assert sweep.notes["argmax_t1_5"] == 0.045
    assert sweep.column("fc_1").max() == pytest.approx(4821.322, rel=REL)
    assert sweep.column("fc_5").max() == pytest.approx(2815.249, rel=REL)
