"""Acceptance gate: every headline quantitative claim, one test each.

Each test prints the measured value next to its target band so a verbose
run doubles as a report.  Two tests encode targets that a faithful
implementation of the stated procedures does not reach; their assertion
messages carry the measured value and the reconstruction that explains the
gap.  They fail hard on purpose rather than being weakened or skipped.
"""

import numpy as np
import pytest

from tntsim import (
    HamiltonianSpec,
    NoiseModel,
    ReadoutKind,
    SpinSystem,
    budget_sweep,
    build_hamiltonian,
    build_spin_operators,
    cfi,
    echo_time_sweep,
    hellinger_cfi_estimate,
    make_protocol,
    noise_sweep,
    optimal_generator_direction,
    prepared_state,
    propagator,
    qfi_pure,
    squeezing_gain,
)
from tntsim.presets import Fig3Config, run_fig3
from tntsim.spin import BasisSpec, parity_operator

TIME_GRID = np.round(np.arange(0.0, 0.12 + 1e-12, 0.0005), 12)


def _qfi_curve(ham, grid):
    return np.array([qfi_pure(prepared_state(make_protocol(ham, t)))[0]
                     for t in grid])


@pytest.fixture(scope="module")
def hellinger(ham20):
    # the distance table does not depend on the phase-space grids
    return run_fig3(Fig3Config(q_theta=6, q_phi=6))["hellinger"]


def test_qfi_peak_time_0p0715(ham100):
    peak = float(TIME_GRID[np.argmax(_qfi_curve(ham100, TIME_GRID))])
    print(f"QFI peak chi*t = {peak:.4f}, target 0.0715 +- 0.002")
    assert abs(peak - 0.0715) <= 0.002


def test_squeezing_gain_peak_time_0p027(ham100):
    gains = []
    for t in TIME_GRID:
        try:
            gains.append(squeezing_gain(prepared_state(make_protocol(ham100, t)))[1])
        except ValueError:  # mean spin vanishes late in the scan
            gains.append(-np.inf)
    peak = float(TIME_GRID[int(np.argmax(gains))])
    print(f"squeezing-gain peak chi*t = {peak:.4f}, target 0.027 +- 0.002")
    assert abs(peak - 0.027) <= 0.002


def test_qcrb_saturation_ideal_readouts(ham100):
    worst = 0.0
    for t1 in (0.01, 0.027, 0.05, 0.072):
        pre = prepared_state(make_protocol(ham100, t1))
        gen = optimal_generator_direction(pre)
        fq = qfi_pure(pre)[0]
        cases = [make_protocol(ham100, t1, generator_dir=gen)]
        for ratio in (0.5, 1.0, 2.0):
            t2 = round(ratio * t1, 12)
            cases.append(make_protocol(ham100, t1, ReadoutKind.ASYMMETRIC_ECHO,
                                       t2=t2, generator_dir=gen))
            cases.append(make_protocol(ham100, t1, ReadoutKind.PSEUDO_ECHO,
                                       t2=t2, generator_dir=gen))
        for spec in cases:
            fc = cfi(spec, phi_eval=1e-4).value
            worst = max(worst, abs(fc - fq) / fq)
    print(f"QCRB saturation worst relative gap = {worst:.2e}, target < 1e-3")
    assert worst < 1e-3


def test_hellinger_ideal_pair_and_blurred_trivial(hellinger):
    ideal_t = hellinger["d2_ideal_trivial"]
    ideal_e = hellinger["d2_ideal_echo"]
    blurred_t = hellinger["d2_blurred_trivial"]
    print(f"d2 ideal trivial/echo = {ideal_t:.4f}/{ideal_e:.4f}, target 0.40 +- 0.01")
    print(f"d2 blurred trivial = {blurred_t:.4f}, target 0.01 +- 0.01")
    assert abs(ideal_t - 0.40) <= 0.01
    assert abs(ideal_e - 0.40) <= 0.01
    assert abs(blurred_t - 0.01) <= 0.01


def test_hellinger_blurred_echo_target(hellinger):
    measured = hellinger["d2_blurred_echo"]
    print(f"d2 blurred echo = {measured:.4f}, target 0.17 +- 0.01")
    assert abs(measured - 0.17) <= 0.01, (
        f"blurred-echo Hellinger distance {measured:.4f} misses 0.17 +- 0.01. "
        "The outcome-normalized blur kernel (columns sum to one, a valid POVM) "
        "yields 0.112 here; reproducing 0.17 requires normalizing across "
        "outcomes instead, which breaks POVM completeness and shifts the echo "
        "noise threshold from 16.7 to about 18.")


def _sigma_star(ham, kind, grid, threads=2, **kw):
    res = noise_sweep(ham, 0.027, grid, kinds=(kind,), threads=threads, **kw)
    return res.notes[f"sigma_star_{kind.value}"]


def test_snl_crossing_trivial_readout(ham100):
    star = _sigma_star(ham100, ReadoutKind.NONE, np.arange(3.5, 5.51, 0.25))
    print(f"sigma* trivial = {star:.3f}, target 4.40 +- 5%")
    assert 4.40 * 0.95 <= star <= 4.40 * 1.05


def test_snl_crossing_echo_readout(ham100):
    star = _sigma_star(ham100, ReadoutKind.ECHO, np.arange(14.0, 19.01, 0.5))
    print(f"sigma* echo = {star:.3f}, target 16.45 +- 5%")
    assert 16.45 * 0.95 <= star <= 16.45 * 1.05


def test_snl_crossing_asymmetric_echo_optimized(ham100):
    star = _sigma_star(ham100, ReadoutKind.ASYMMETRIC_ECHO,
                       np.arange(30.0, 60.01, 2.0), threads=4)
    print(f"sigma* asymmetric echo (t2 optimized) = {star:.3f}, target 39.17 +- 15%")
    assert 39.17 * 0.85 <= star <= 39.17 * 1.15, (
        f"asymmetric-echo threshold {star:.2f} misses 39.17 +- 15%. Optimizing "
        "t2 at every noise value rides the broad ratio 2.7-3.5 plateau and "
        "pushes the crossing to about 56; holding t2 = 2 t1 fixed instead "
        "reproduces the target (measured 39.30, within 0.4%).")


def test_echo_ratio_interior_argmax_strong_noise(ham100):
    ratios = np.round(np.arange(0.5, 3.01, 0.1), 12)
    res = echo_time_sweep(ham100, 0.072, ratios, NoiseModel(5.0), threads=2)
    best = res.notes["argmax_ratio"]
    print(f"argmax t2/t1 at sigma=5, chi*t1=0.072: {best:.2f}, target 1.5 +- 0.2")
    assert 1.3 <= best <= 1.7
    assert ratios[0] < best < ratios[-1]  # interior maximum, not an edge hit


def test_echo_ratio_nondecreasing_early_time(ham100):
    ratios = np.round(np.arange(1.0, 3.01, 0.1), 12)
    res = echo_time_sweep(ham100, 0.027, ratios, NoiseModel(5.0), threads=2)
    fc = res.column("fc")
    worst = float(np.min(fc[1:] / fc[:-1]))
    print(f"worst successive F_c ratio at sigma=5, chi*t1=0.027: {worst:.6f}, "
          "floor 0.995 (plateau wiggle allowance)")
    assert np.all(fc[1:] >= fc[:-1] * 0.995)


def test_echo_ratio_weak_noise_saturates_qcrb(ham100):
    ratios = np.round(np.arange(0.5, 3.01, 0.1), 12)
    worst = 0.0
    for t1 in (0.027, 0.072):
        res = echo_time_sweep(ham100, t1, ratios, NoiseModel(0.1), threads=2)
        gap = np.abs(res.column("fc") - res.column("qcrb")) / res.column("qcrb")
        worst = max(worst, float(gap.max()))
    print(f"sigma=0.1 worst F_c shortfall from QCRB: {worst:.2e}, target < 1%")
    assert worst < 0.01


BUDGET_GRID = np.round(np.arange(0.005, 0.0701, 0.005), 12)


def test_budget_argmax_interior_strong_noise(ham100):
    for sigma in (1.0, 5.0):
        res = budget_sweep(ham100, 0.1, BUDGET_GRID, NoiseModel(sigma), threads=2)
        best = res.notes["argmax_t1"]
        print(f"argmax t1 at sigma={sigma}: {best:.3f}, target in [0.040, 0.060]")
        assert 0.040 <= best <= 0.060


def test_budget_monotone_weak_noise(ham100):
    res = budget_sweep(ham100, 0.1, BUDGET_GRID, NoiseModel(0.1), threads=2)
    fc = res.column("fc")
    print(f"sigma=0.1 budget curve rises {fc[0]:.0f} -> {fc[-1]:.0f} monotonically")
    assert np.all(np.diff(fc) > 0)


def test_property_invariants(ham100, ham20):
    sx, sy, sz = build_spin_operators(ham100.system)
    comm = sx.matrix @ sy.matrix - sy.matrix @ sx.matrix - 1j * sz.matrix
    assert np.abs(comm).max() < 1e-11

    pi_x = parity_operator(ham100.system, BasisSpec("sx")).matrix
    u1 = propagator(build_hamiltonian(ham100), 0.0715).matrix
    assert np.abs(u1 @ pi_x - pi_x @ u1).max() < 1e-10

    for t1, sigma in ((0.01, 0.0), (0.027, 1.0), (0.05, 5.0), (0.072, 20.0)):
        pre = prepared_state(make_protocol(ham100, t1))
        fq = qfi_pure(pre)[0]
        spec = make_protocol(ham100, t1, ReadoutKind.ECHO,
                             generator_dir=optimal_generator_direction(pre))
        fc = cfi(spec, noise=NoiseModel(sigma), phi_eval=1e-4).value
        assert fc <= fq * (1 + 1e-9)

    spec = make_protocol(ham100, 0.027, ReadoutKind.ECHO)
    a = cfi(spec, noise=NoiseModel(1.0), phi_eval=1e-3, method="analytic").value
    f = cfi(spec, noise=NoiseModel(1.0), phi_eval=1e-3, method="fd").value
    assert abs(a - f) <= 1e-4 * a

    for kind in (ReadoutKind.NONE, ReadoutKind.ECHO):
        s20 = make_protocol(ham20, 0.275, kind)
        est = hellinger_cfi_estimate(s20, dphi=1e-3)
        ref = cfi(s20, phi_eval=1e-4).value
        assert abs(est - ref) <= 0.01 * ref
    print("property invariants: commutators, parity conservation, F_c <= F_Q, "
          "derivative agreement, Hellinger oracle all within tolerance")


def test_tnt_dominates_oat():
    grid = np.round(np.arange(0.0, 0.0715 + 1e-12, 0.0005), 12)
    sys = SpinSystem(100)
    tnt = _qfi_curve(HamiltonianSpec(sys, kind="tnt", lambda_param=2.0), grid)
    oat = _qfi_curve(HamiltonianSpec(sys, kind="oat"), grid)
    margin = float(np.min(tnt - oat))
    print(f"min F_Q(TNT) - F_Q(OAT) over the scan: {margin:.3e} (>= 0 required)")
    assert np.all(tnt >= oat - 1e-9 * np.maximum(oat, 1.0))
