"""Numerical searches over measurement bases and readout schedules.

The measurement basis is optimized within two planes: the plane normal to
the phase generator S_n (which contains S_x) and the plane normal to S_x
(which contains S_n).  Each plane is scanned on a coarse angle grid and the
best bracket is refined by golden-section search.  Sweeps over detection
noise, echo duration, and a fixed time budget build on that search.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    HamiltonianSpec,
    ProtocolSpec,
    ReadoutKind,
    _direction_eig,
    final_state_and_derivative,
    make_protocol,
    prepared_state,
)
from .metrology import (
    NoiseModel,
    _fisher_sum,
    noise_kernel,
    optimal_generator_direction,
    qfi_pure,
)
from .spin import StateVector

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
PLANE_DEGENERACY_TOL = 1e-9

# t2/t1 grid for the per-sigma asymmetric-echo optimization
DEFAULT_RATIO_GRID = tuple(float(r) for r in np.round(np.arange(1.0, 5.0 + 1e-9, 0.1), 10))


@dataclass(frozen=True)
class BasisSearchSpec:
    """Coarse-grid plus golden-section settings for the in-plane search."""

    grid: int = 64
    refine: int = 40
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.grid < 8:
            raise ValueError("coarse grid needs at least 8 angles")
        if self.refine < 0 or self.tolerance <= 0.0:
            raise ValueError("invalid refinement settings")


@dataclass(frozen=True)
class BasisOptimum:
    """Best measurement direction found by the in-plane search."""

    direction: tuple[float, float, float]
    plane: str
    angle: float
    value: float


@dataclass(eq=False)
class SweepResult:
    """Tabular sweep output: one column set, one row per sweep point."""

    label: str
    columns: tuple[str, ...]
    rows: np.ndarray
    notes: dict[str, float]

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def _polar_angles(u: np.ndarray) -> tuple[float, float]:
    return float(np.arccos(np.clip(u[2], -1.0, 1.0))), float(np.arctan2(u[1], u[0]))


def _make_objective(spec: ProtocolSpec, noise: NoiseModel,
                    psi0: StateVector | None, phi_eval: float | None):
    """Classical Fisher information as a function of measurement direction.

    The protocol output and its phase derivative are fixed once; each basis
    direction then costs four dense matvecs: the basis change B = Rz Ry is
    applied as a diagonal z-phase followed by the cached S_y eigenbasis.
    """
    psi, dpsi = final_state_and_derivative(spec, psi0, phi_eval)
    system = spec.hamiltonian.system
    mu, vy = _direction_eig(system.n_atoms, (0.0, 1.0, 0.0))
    vh = vy.conj().T
    m = system.m_values()
    kernel = noise_kernel(system, noise)

    def value_at(u: np.ndarray) -> float:
        theta, phi_az = _polar_angles(u)
        zpsi = np.exp(1j * phi_az * m)
        ypha = np.exp(1j * theta * mu)
        a = vy @ (ypha * (vh @ (zpsi * psi)))
        da = vy @ (ypha * (vh @ (zpsi * dpsi)))
        p = np.abs(a) ** 2
        dp = 2.0 * np.real(np.conjugate(a) * da)
        if kernel is not None:
            p = kernel @ p
            dp = kernel @ dp
        return _fisher_sum(p, dp)[0]

    return value_at


def _search_planes(generator_dir) -> tuple[tuple[str, np.ndarray, np.ndarray], ...]:
    """In-plane frames (label, e1, e2); angle 0 points along e1."""
    n = np.asarray(generator_dir, dtype=float)
    n = n / np.linalg.norm(n)
    x = np.array([1.0, 0.0, 0.0])

    e1 = x - (x @ n) * n
    if np.linalg.norm(e1) < PLANE_DEGENERACY_TOL:
        e1 = np.array([0.0, 1.0, 0.0]) - n[1] * n
    e1 = e1 / np.linalg.norm(e1)
    plane_n = ("normal_to_generator", e1, np.cross(n, e1))

    f1 = n - (n @ x) * x
    if np.linalg.norm(f1) < PLANE_DEGENERACY_TOL:
        f1 = np.array([0.0, 1.0, 0.0])
    f1 = f1 / np.linalg.norm(f1)
    plane_x = ("normal_to_sx", f1, np.cross(x, f1))

    return plane_n, plane_x


def _golden_max(f, lo: float, hi: float, iters: int, tol: float) -> tuple[float, float]:
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if hi - lo < tol:
            break
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def optimize_basis(spec: ProtocolSpec, noise: NoiseModel = NoiseModel(0.0),
                   psi0: StateVector | None = None,
                   search: BasisSearchSpec = BasisSearchSpec(),
                   phi_eval: float | None = None) -> BasisOptimum:
    """Maximize the classical Fisher information over the two search planes.

    Ties resolve toward the generator-normal plane and toward angle 0, so a
    flat landscape returns the S_x basis.  The refined angle is kept only
    when it strictly beats the best coarse-grid point.
    """
    objective = _make_objective(spec, noise, psi0, phi_eval)
    best: BasisOptimum | None = None
    for label, e1, e2 in _search_planes(spec.generator_dir):

        def f(theta: float) -> float:
            return objective(np.cos(theta) * e1 + np.sin(theta) * e2)

        grid = np.linspace(0.0, 2.0 * np.pi, search.grid, endpoint=False)
        vals = np.array([f(t) for t in grid])
        i = int(np.argmax(vals))
        angle, value = float(grid[i]), float(vals[i])
        step = 2.0 * np.pi / search.grid
        r_angle, r_value = _golden_max(f, angle - step, angle + step,
                                       search.refine, search.tolerance)
        if r_value > value:
            angle, value = float(r_angle % (2.0 * np.pi)), float(r_value)
        if best is None or value > best.value:
            u = np.cos(angle) * e1 + np.sin(angle) * e2
            u = u / np.linalg.norm(u)
            best = BasisOptimum(direction=(float(u[0]), float(u[1]), float(u[2])),
                                plane=label, angle=angle, value=value)
    return best


def _best_value(spec: ProtocolSpec, noise: NoiseModel, search: BasisSearchSpec,
                basis: str, phi_eval: float | None) -> float:
    if basis == "fixed":
        objective = _make_objective(spec, noise, None, phi_eval)
        return objective(np.array([1.0, 0.0, 0.0]))
    if basis == "optimized":
        return optimize_basis(spec, noise, search=search, phi_eval=phi_eval).value
    raise ValueError(f"unknown basis mode {basis!r}")


def _map_ordered(fn, items, threads: int) -> list:
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def snl_crossing(grid, values, level: float) -> float | None:
    """First descending crossing of `level`, by linear interpolation."""
    g = np.asarray(grid, dtype=float)
    v = np.asarray(values, dtype=float)
    for i in range(len(g) - 1):
        if v[i] >= level > v[i + 1]:
            frac = (v[i] - level) / (v[i] - v[i + 1])
            return float(g[i] + frac * (g[i + 1] - g[i]))
    return None


def noise_sweep(hamiltonian: HamiltonianSpec, t1: float, sigma_grid,
                kinds: tuple[ReadoutKind, ...] = (ReadoutKind.NONE, ReadoutKind.ECHO,
                                                  ReadoutKind.ASYMMETRIC_ECHO,
                                                  ReadoutKind.PSEUDO_ECHO),
                ratio_grid=None, search: BasisSearchSpec = BasisSearchSpec(),
                phi_eval: float = 1e-4, basis: str = "optimized",
                threads: int = 1) -> SweepResult:
    """F_c versus detection noise for the chosen readout kinds.

    The asymmetric echo optimizes t2 over `ratio_grid` (multiples of t1) at
    every noise value; the winning ratio is reported alongside.  Crossings
    of the shot-noise level F = N are recorded in the notes when the grid
    brackets them.
    """
    sigma_grid = np.asarray(sigma_grid, dtype=float)
    if np.any(np.diff(sigma_grid) <= 0.0):
        raise ValueError("sigma grid must be strictly ascending")
    if ratio_grid is None:
        ratio_grid = DEFAULT_RATIO_GRID
    pre = prepared_state(make_protocol(hamiltonian, t1, phi=phi_eval))
    gen = optimal_generator_direction(pre)
    fq = qfi_pure(pre)[0]
    n = float(hamiltonian.system.n_atoms)

    def row(sigma: float) -> list[float]:
        noise = NoiseModel(float(sigma))
        out: list[float] = [float(sigma)]
        asym_ratio = math.nan
        for kind in kinds:
            if kind is ReadoutKind.ASYMMETRIC_ECHO:
                best_v, best_r = -math.inf, math.nan
                for r in ratio_grid:
                    spec = make_protocol(hamiltonian, t1, ReadoutKind.ASYMMETRIC_ECHO,
                                         t2=round(r * t1, 12), phi=phi_eval,
                                         generator_dir=gen)
                    v = _best_value(spec, noise, search, basis, phi_eval)
                    if v > best_v:
                        best_v, best_r = v, float(r)
                out.append(best_v)
                asym_ratio = best_r
            else:
                spec = make_protocol(hamiltonian, t1, kind, phi=phi_eval,
                                     generator_dir=gen)
                out.append(_best_value(spec, noise, search, basis, phi_eval))
        if ReadoutKind.ASYMMETRIC_ECHO in kinds:
            out.append(asym_ratio)
        out.extend([fq, n])
        return out

    rows = np.array(_map_ordered(row, sigma_grid, threads))
    columns = ["sigma"] + [f"fc_{k.value}" for k in kinds]
    if ReadoutKind.ASYMMETRIC_ECHO in kinds:
        columns.append("asym_ratio")
    columns += ["qcrb", "snl"]
    notes = {"qfi_prepared": float(fq), "snl": n}
    for k in kinds:
        star = snl_crossing(sigma_grid, rows[:, columns.index(f"fc_{k.value}")], n)
        if star is not None:
            notes[f"sigma_star_{k.value}"] = star
    return SweepResult("noise_sweep", tuple(columns), rows, notes)


def echo_time_sweep(hamiltonian: HamiltonianSpec, t1: float, ratio_grid,
                    noise: NoiseModel, search: BasisSearchSpec = BasisSearchSpec(),
                    phi_eval: float = 1e-4, basis: str = "optimized",
                    threads: int = 1) -> SweepResult:
    """F_c versus echo duration t2/t1 for the time-reversed readout."""
    ratio_grid = np.asarray(ratio_grid, dtype=float)
    if np.any(ratio_grid <= 0.0):
        raise ValueError("ratios must be positive")
    pre = prepared_state(make_protocol(hamiltonian, t1, phi=phi_eval))
    gen = optimal_generator_direction(pre)
    fq = qfi_pure(pre)[0]

    def row(ratio: float) -> list[float]:
        t2 = round(float(ratio) * t1, 12)
        spec = make_protocol(hamiltonian, t1, ReadoutKind.ASYMMETRIC_ECHO, t2=t2,
                             phi=phi_eval, generator_dir=gen)
        return [float(ratio), t2, _best_value(spec, noise, search, basis, phi_eval), fq]

    rows = np.array(_map_ordered(row, ratio_grid, threads))
    notes = {"qfi_prepared": float(fq),
             "argmax_ratio": float(ratio_grid[int(np.argmax(rows[:, 2]))])}
    return SweepResult("echo_time_sweep", ("ratio", "t2", "fc", "qcrb"), rows, notes)


def budget_sweep(hamiltonian: HamiltonianSpec, total_time: float, t1_grid,
                 noise: NoiseModel, search: BasisSearchSpec = BasisSearchSpec(),
                 phi_eval: float = 1e-4, basis: str = "optimized",
                 threads: int = 1) -> SweepResult:
    """F_c over a fixed interaction budget t1 + t2 = total_time.

    The readout is the time-reversed unitary with whatever time remains;
    the generator direction and the QCRB are recomputed for every t1.
    """
    t1_grid = np.asarray(t1_grid, dtype=float)
    if np.any(t1_grid <= 0.0) or np.any(t1_grid >= total_time):
        raise ValueError("need 0 < t1 < total_time across the grid")

    def row(t1: float) -> list[float]:
        t1 = float(t1)
        t2 = round(total_time - t1, 12)
        pre = prepared_state(make_protocol(hamiltonian, t1, phi=phi_eval))
        gen = optimal_generator_direction(pre)
        fq = qfi_pure(pre)[0]
        spec = make_protocol(hamiltonian, t1, ReadoutKind.ASYMMETRIC_ECHO, t2=t2,
                             phi=phi_eval, generator_dir=gen)
        return [t1, t2, _best_value(spec, noise, search, basis, phi_eval), fq]

    rows = np.array(_map_ordered(row, t1_grid, threads))
    notes = {"total_time": float(total_time),
             "argmax_t1": float(t1_grid[int(np.argmax(rows[:, 2]))])}
    return SweepResult("budget_sweep", ("t1", "t2", "fc", "qcrb"), rows, notes)
