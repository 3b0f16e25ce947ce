"""Scenario presets: the parameter sets behind the six reference figures.

Each preset is a frozen config dataclass plus a run function returning a
dict of named artifacts (tables, Q-grids, scalar summaries).  Serialization
lives in the output module; the CLI glues the two together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import (
    HamiltonianSpec,
    ProtocolSpec,
    ReadoutKind,
    build_hamiltonian,
    make_protocol,
    prepared_state,
    propagator,
    run_protocol,
)
from .husimi import QGrid, QGridSpec, husimi_q
from .metrology import (
    NoiseModel,
    cfi,
    convolve_noise,
    hellinger_distance_sq,
    measurement_probs,
    optimal_generator_direction,
    qfi_pure,
    squeezing_gain,
)
from .optimize import (
    BasisSearchSpec,
    SweepResult,
    budget_sweep,
    echo_time_sweep,
    noise_sweep,
    optimize_basis,
)
from .spin import (
    BasisSpec,
    SpinSystem,
    StateVector,
    build_spin_operators,
    check_parity_conditions,
    parity_operator,
    spin_direction,
)


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    return np.round(np.arange(start, stop + 0.5 * step, step), 12)


def _hamiltonian(n_atoms: int, kind: str, lam: float | None) -> HamiltonianSpec:
    system = SpinSystem(n_atoms)
    if kind == "oat":
        return HamiltonianSpec(system, "oat", 1.0)
    return HamiltonianSpec(system, "tnt", 1.0, lam)


@dataclass(frozen=True)
class Fig1Config:
    """Husimi frames plus QFI / squeezing-gain curves for TNT and OAT."""

    n_atoms: int = 100
    lam: float = 2.0
    frame_times: tuple[float, ...] = (0.0, 0.0238, 0.0477, 0.0715)
    scan_start: float = 0.0
    scan_stop: float = 0.08
    scan_step: float = 0.0005
    q_theta: int = 90
    q_phi: int = 180


def run_fig1(cfg: Fig1Config, threads: int = 1) -> dict[str, object]:
    tnt = _hamiltonian(cfg.n_atoms, "tnt", cfg.lam)
    oat = _hamiltonian(cfg.n_atoms, "oat", None)
    times = _grid(cfg.scan_start, cfg.scan_stop, cfg.scan_step)
    rows = []
    for t in times:
        row = [float(t)]
        for ham in (tnt, oat):
            psi = prepared_state(make_protocol(ham, float(t)))
            row.append(qfi_pure(psi)[0])
            row.append(squeezing_gain(psi)[1])
        rows.append(row)
    curves = SweepResult(
        "fig1_curves",
        ("chi_t", "fq_tnt", "gain_tnt", "fq_oat", "gain_oat"),
        np.array(rows),
        {"n_atoms": float(cfg.n_atoms), "lambda": cfg.lam,
         "snl": float(cfg.n_atoms), "heisenberg": float(cfg.n_atoms) ** 2},
    )
    out: dict[str, object] = {"curves": curves}
    qspec = QGridSpec(cfg.q_theta, cfg.q_phi, normalize=True)
    for i, t in enumerate(cfg.frame_times):
        psi = prepared_state(make_protocol(tnt, float(t)))
        out[f"q{i}"] = husimi_q(psi, qspec)
    return out


@dataclass(frozen=True)
class Fig2Config:
    """CFI under detection noise along the preparation-time scan."""

    n_atoms: int = 100
    lam: float = 2.0
    scan_start: float = 0.0
    scan_stop: float = 0.10
    scan_step: float = 0.002
    sigmas: tuple[float, ...] = (0.1, 1.0, 5.0)
    basis: str = "fixed"
    phi_eval: float = 1e-4


def run_fig2(cfg: Fig2Config, threads: int = 1) -> dict[str, object]:
    ham = _hamiltonian(cfg.n_atoms, "tnt", cfg.lam)
    times = _grid(cfg.scan_start, cfg.scan_stop, cfg.scan_step)
    kinds = (ReadoutKind.NONE, ReadoutKind.ECHO)
    columns = ["chi_t", "qfi"] + [f"fc_{k.value}_{s:g}" for k in kinds for s in cfg.sigmas]

    def row(t: float) -> list[float]:
        pre = prepared_state(make_protocol(ham, t))
        gen = optimal_generator_direction(pre)
        out = [t, qfi_pure(pre)[0]]
        for kind in kinds:
            spec = make_protocol(ham, t, kind, phi=cfg.phi_eval, generator_dir=gen)
            for sigma in cfg.sigmas:
                noise = NoiseModel(sigma)
                if cfg.basis == "optimized":
                    out.append(optimize_basis(spec, noise, phi_eval=cfg.phi_eval).value)
                else:
                    out.append(cfi(spec, noise=noise, phi_eval=cfg.phi_eval).value)
        return out

    rows = np.array([row(float(t)) for t in times])
    table = SweepResult("fig2_curves", tuple(columns), rows,
                        {"n_atoms": float(cfg.n_atoms), "lambda": cfg.lam,
                         "snl": float(cfg.n_atoms)})
    return {"curves": table}


@dataclass(frozen=True)
class Fig3Config:
    """Four-panel state gallery with outcome histograms and Hellinger summary."""

    n_atoms: int = 20
    lam: float = 2.0
    chi_t: float = 0.275
    sigma: float = 1.0
    phi: float | None = None
    q_theta: int = 90
    q_phi: int = 180

    def resolved_phi(self) -> float:
        return self.phi if self.phi is not None else 1.0 / (2.0 * math.sqrt(self.n_atoms))


def run_fig3(cfg: Fig3Config, threads: int = 1) -> dict[str, object]:
    ham = _hamiltonian(cfg.n_atoms, "tnt", cfg.lam)
    phi0 = cfg.resolved_phi()
    pre = prepared_state(make_protocol(ham, cfg.chi_t))
    gen = optimal_generator_direction(pre)
    # display rotation about x taking the generator direction onto +y
    gamma = math.atan2(gen[2], gen[1])
    sx, _, _ = build_spin_operators(ham.system)
    rot = sx.expm_factor(-gamma)

    panels = [(0.0, ReadoutKind.NONE), (phi0, ReadoutKind.NONE),
              (0.0, ReadoutKind.ECHO), (phi0, ReadoutKind.ECHO)]
    noise = NoiseModel(cfg.sigma)
    qspec = QGridSpec(cfg.q_theta, cfg.q_phi, normalize=True)
    sx_basis = BasisSpec("sx")
    out: dict[str, object] = {}
    dists: dict[tuple[float, ReadoutKind], tuple] = {}
    for i, (phi, kind) in enumerate(panels):
        spec = make_protocol(ham, cfg.chi_t, kind, phi=phi, generator_dir=gen)
        final = run_protocol(spec)
        rotated = StateVector(ham.system, rot.matrix @ final.amplitudes)
        out[f"q{i}"] = husimi_q(rotated, qspec)
        ideal = measurement_probs(final, sx_basis)
        blurred = convolve_noise(ideal, noise)
        dists[(phi, kind)] = (ideal, blurred)
        out[f"p{i}"] = SweepResult(
            f"fig3_probs_{i}", ("m", "p_ideal", "p_blurred"),
            np.column_stack([ideal.outcomes, ideal.probs, blurred.probs]),
            {"phi": phi, "sigma": cfg.sigma,
             "readout": 1.0 if kind is ReadoutKind.ECHO else 0.0},
        )
    summary = {
        "n_atoms": cfg.n_atoms, "lambda": cfg.lam, "chi_t": cfg.chi_t,
        "sigma": cfg.sigma, "phi": phi0,
        "d2_ideal_trivial": hellinger_distance_sq(
            dists[(0.0, ReadoutKind.NONE)][0], dists[(phi0, ReadoutKind.NONE)][0]),
        "d2_ideal_echo": hellinger_distance_sq(
            dists[(0.0, ReadoutKind.ECHO)][0], dists[(phi0, ReadoutKind.ECHO)][0]),
        "d2_blurred_trivial": hellinger_distance_sq(
            dists[(0.0, ReadoutKind.NONE)][1], dists[(phi0, ReadoutKind.NONE)][1]),
        "d2_blurred_echo": hellinger_distance_sq(
            dists[(0.0, ReadoutKind.ECHO)][1], dists[(phi0, ReadoutKind.ECHO)][1]),
    }
    out["hellinger"] = summary
    return out


FIG4_COLUMN_NAMES = {"fc_none": "fc_trivial", "fc_asymmetric_echo": "fc_asym",
                     "fc_pseudo_echo": "fc_pseudo"}


@dataclass(frozen=True)
class Fig4Config:
    """F_c decay under detection noise for the four readout choices."""

    n_atoms: int = 100
    lam: float = 2.0
    t1_values: tuple[float, ...] = (0.027, 0.072)
    sigma_values: tuple[float, ...] = (0.1,) + tuple(float(s) for s in range(1, 46))
    ratio_start: float = 1.0
    ratio_stop: float = 5.0
    ratio_step: float = 0.1
    basis: str = "optimized"
    phi_eval: float = 1e-4


def run_fig4(cfg: Fig4Config, threads: int = 1) -> dict[str, object]:
    ham = _hamiltonian(cfg.n_atoms, "tnt", cfg.lam)
    ratios = _grid(cfg.ratio_start, cfg.ratio_stop, cfg.ratio_step)
    out: dict[str, object] = {}
    for label, t1 in zip(("panel_a", "panel_b"), cfg.t1_values):
        res = noise_sweep(ham, t1, np.asarray(cfg.sigma_values), ratio_grid=ratios,
                          phi_eval=cfg.phi_eval, basis=cfg.basis, threads=threads)
        keep = [c for c in res.columns if c != "asym_ratio"]
        cols = tuple(FIG4_COLUMN_NAMES.get(c, c) for c in keep)
        rows = np.column_stack([res.column(c) for c in keep])
        notes = dict(res.notes)
        notes["t1"] = t1
        out[label] = SweepResult(f"fig4_{label}", cols, rows, notes)
    return out


@dataclass(frozen=True)
class Fig5Config:
    """F_c versus echo duration at fixed noise levels."""

    n_atoms: int = 100
    lam: float = 2.0
    t1_values: tuple[float, ...] = (0.027, 0.072)
    sigmas: tuple[float, ...] = (0.1, 5.0)
    ratio_start: float = 0.5
    ratio_stop: float = 3.0
    ratio_step: float = 0.1
    basis: str = "optimized"
    phi_eval: float = 1e-4


def run_fig5(cfg: Fig5Config, threads: int = 1) -> dict[str, object]:
    ham = _hamiltonian(cfg.n_atoms, "tnt", cfg.lam)
    ratios = _grid(cfg.ratio_start, cfg.ratio_stop, cfg.ratio_step)
    out: dict[str, object] = {}
    for label, t1 in zip(("panel_a", "panel_b"), cfg.t1_values):
        columns = ["ratio", "t2"]
        col_data = [ratios, np.round(ratios * t1, 12)]
        notes: dict[str, float] = {"t1": t1, "snl": float(cfg.n_atoms)}
        qcrb = None
        for sigma in cfg.sigmas:
            res = echo_time_sweep(ham, t1, ratios, NoiseModel(sigma),
                                  phi_eval=cfg.phi_eval, basis=cfg.basis,
                                  threads=threads)
            columns.append(f"fc_{sigma:g}")
            col_data.append(res.column("fc"))
            notes[f"argmax_ratio_{sigma:g}"] = res.notes["argmax_ratio"]
            qcrb = res.column("qcrb")
            notes["qfi_prepared"] = res.notes["qfi_prepared"]
        columns += ["qcrb", "snl"]
        col_data += [qcrb, np.full(len(ratios), float(cfg.n_atoms))]
        out[label] = SweepResult(f"fig5_{label}", tuple(columns),
                                 np.column_stack(col_data), notes)
    return out


@dataclass(frozen=True)
class Fig6Config:
    """F_c over a fixed total interaction-time budget."""

    n_atoms: int = 100
    lam: float = 2.0
    total_time: float = 0.1
    t1_start: float = 0.005
    t1_stop: float = 0.070
    t1_step: float = 0.005
    sigmas: tuple[float, ...] = (0.1, 1.0, 5.0)
    basis: str = "optimized"
    phi_eval: float = 1e-4


def run_fig6(cfg: Fig6Config, threads: int = 1) -> dict[str, object]:
    ham = _hamiltonian(cfg.n_atoms, "tnt", cfg.lam)
    t1_grid = _grid(cfg.t1_start, cfg.t1_stop, cfg.t1_step)
    columns = ["t1", "t2"]
    col_data = [t1_grid, np.round(cfg.total_time - t1_grid, 12)]
    notes: dict[str, float] = {"total_time": cfg.total_time, "snl": float(cfg.n_atoms)}
    qcrb = None
    for sigma in cfg.sigmas:
        res = budget_sweep(ham, cfg.total_time, t1_grid, NoiseModel(sigma),
                           phi_eval=cfg.phi_eval, basis=cfg.basis, threads=threads)
        columns.append(f"fc_{sigma:g}")
        col_data.append(res.column("fc"))
        notes[f"argmax_t1_{sigma:g}"] = res.notes["argmax_t1"]
        qcrb = res.column("qcrb")
    columns += ["qcrb", "snl"]
    col_data += [qcrb, np.full(len(t1_grid), float(cfg.n_atoms))]
    table = SweepResult("fig6_sweep", tuple(columns), np.column_stack(col_data), notes)
    return {"sweep": table}


@dataclass(frozen=True)
class RunConfig:
    """Single-protocol evaluation: all headline metrics for one setting."""

    n_atoms: int = 100
    hamiltonian: str = "tnt"
    lam: float | None = 2.0
    t1: float = 0.027
    readout: str = "none"
    t2: float | None = None
    ratio: float | None = None
    phi_eval: float = 1e-4
    sigma: float = 0.0
    basis: str = "fixed"
    husimi: bool = False
    q_theta: int = 90
    q_phi: int = 180

    def __post_init__(self):
        if self.t2 is not None and self.ratio is not None:
            raise ValueError("give t2 or ratio, not both")


def _build_protocol(cfg) -> ProtocolSpec:
    ham = _hamiltonian(cfg.n_atoms, cfg.hamiltonian, cfg.lam)
    kind = ReadoutKind(cfg.readout)
    t2 = cfg.t2
    if getattr(cfg, "ratio", None) is not None:
        t2 = round(cfg.ratio * cfg.t1, 12)
    pre = prepared_state(make_protocol(ham, cfg.t1))
    gen = optimal_generator_direction(pre)
    return make_protocol(ham, cfg.t1, kind, t2=t2, phi=cfg.phi_eval, generator_dir=gen)


def run_single(cfg: RunConfig, threads: int = 1) -> dict[str, object]:
    spec = _build_protocol(cfg)
    noise = NoiseModel(cfg.sigma)
    pre = prepared_state(spec)
    fq, fq_dir = qfi_pure(pre)
    final = run_protocol(spec)

    if cfg.basis == "optimized":
        opt = optimize_basis(spec, noise, phi_eval=cfg.phi_eval)
        meas = BasisSpec.along(opt.direction)
        fc_a = opt.value
    else:
        meas = BasisSpec("sx")
        fc_a = cfi(spec, noise=noise, phi_eval=cfg.phi_eval).value
    spec_m = replace(spec, measurement=meas)
    fc_fd = cfi(spec_m, noise=noise, phi_eval=cfg.phi_eval, method="fd").value

    summary: dict[str, object] = {
        "qfi": fq, "qfi_direction": [float(x) for x in fq_dir],
        "fc_analytic": fc_a, "fc_finite_difference": fc_fd,
        "phi_eval": cfg.phi_eval, "sigma": cfg.sigma, "basis": cfg.basis,
        "mean_spin_prepared": [float(pre.expectation(op))
                               for op in build_spin_operators(pre.system)],
    }
    try:
        xi2, gain = squeezing_gain(pre)
        summary["xi2"] = xi2
        summary["squeezing_gain"] = gain
    except ValueError:
        summary["xi2"] = None
        summary["squeezing_gain"] = None

    ideal = measurement_probs(final, meas)
    blurred = convolve_noise(ideal, noise)
    probs = SweepResult("run_probs", ("m", "p_ideal", "p_blurred"),
                        np.column_stack([ideal.outcomes, ideal.probs, blurred.probs]),
                        {"sigma": cfg.sigma})
    out: dict[str, object] = {"summary": summary, "probs": probs}
    if cfg.husimi:
        out["q"] = husimi_q(final, QGridSpec(cfg.q_theta, cfg.q_phi))
    return out


@dataclass(frozen=True)
class CertifyConfig:
    """Inputs for the parity-condition certification report."""

    n_atoms: int = 100
    hamiltonian: str = "tnt"
    lam: float | None = 2.0
    t1: float = 0.027
    readout: str = "echo"
    t2: float | None = None
    rotation_angle: float = 0.5
    basis: str = "sx"
    tolerance: float = 1e-9


def run_certify(cfg: CertifyConfig, threads: int = 1) -> dict[str, object]:
    ham = _hamiltonian(cfg.n_atoms, cfg.hamiltonian, cfg.lam)
    system = ham.system
    pre = prepared_state(make_protocol(ham, cfg.t1))
    gen_dir = optimal_generator_direction(pre)
    generator = spin_direction(system, gen_dir)
    h = build_hamiltonian(ham)
    t2 = cfg.t2 if cfg.t2 is not None else cfg.t1
    if cfg.readout == "none":
        readout = propagator(h, 0.0)
    elif cfg.readout in ("echo", "asymmetric_echo"):
        readout = propagator(h, -t2)
    elif cfg.readout == "pseudo_echo":
        readout = propagator(h, t2)
    elif cfg.readout == "rotation_x":
        sx, _, _ = build_spin_operators(system)
        readout = sx.expm_factor(cfg.rotation_angle)
    else:
        raise ValueError(f"unknown readout {cfg.readout!r}")
    basis = BasisSpec(cfg.basis)
    report = check_parity_conditions(pre, generator, readout, basis,
                                     tolerance=cfg.tolerance)
    return {"report": {
        "all_ok": report.all_ok,
        "state_parity": {"ok": report.state_parity.ok,
                         "residual": report.state_parity.residual,
                         "parity_index": report.parity_index},
        "generator_flip": {"ok": report.generator_flip.ok,
                           "residual": report.generator_flip.residual},
        "readout_conserves": {"ok": report.readout_conserves.ok,
                              "residual": report.readout_conserves.residual},
        "generator_dir": [float(x) for x in gen_dir],
        "tolerance": cfg.tolerance,
    }}


PRESETS = {
    "fig1": (Fig1Config, run_fig1),
    "fig2": (Fig2Config, run_fig2),
    "fig3": (Fig3Config, run_fig3),
    "fig4": (Fig4Config, run_fig4),
    "fig5": (Fig5Config, run_fig5),
    "fig6": (Fig6Config, run_fig6),
}
