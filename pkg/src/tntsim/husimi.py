"""SU(2) Husimi Q-function sampling on a uniform (theta, phi) grid.

Q(theta, phi) = |<theta,phi|psi>|^2 for pure states, evaluated against the
spin coherent states.  Grids are uniform in both angles (cell-centered), so
heatmap rendering needs no reprojection; the quadrature identity uses
sin(theta) weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin import SpinSystem, StateVector, coherent_amplitudes

QUADRATURE_TOL = 1e-3


@dataclass(frozen=True)
class QGridSpec:
    """Grid sizes and normalization mode for Husimi sampling."""

    n_theta: int = 90
    n_phi: int = 180
    normalize: bool = True

    def __post_init__(self):
        if self.n_theta < 1 or self.n_phi < 1:
            raise ValueError("Husimi grid must have at least one cell per axis")


@dataclass(eq=False)
class QGrid:
    """Sampled Q values on cell-centered angles, row-major in (theta, phi)."""

    system: SpinSystem
    thetas: np.ndarray
    phis: np.ndarray
    values: np.ndarray
    normalized: bool
    q_max: float

    @property
    def n_theta(self) -> int:
        return len(self.thetas)

    @property
    def n_phi(self) -> int:
        return len(self.phis)


def husimi_point(psi: StateVector, theta: float, phi: float) -> float:
    """Q at a single phase-space point."""
    c = coherent_amplitudes(psi.system.n_atoms, theta, phi)
    return float(np.abs(np.vdot(c, psi.amplitudes)) ** 2)


def husimi_q(psi: StateVector, spec: QGridSpec = QGridSpec()) -> QGrid:
    """Sample Q over the grid; optionally rescale to Q/Q_max.

    The coherent amplitudes factor as a real theta profile times azimuthal
    phases e^{i phi m}, so the whole grid is two dense products.
    """
    system = psi.system
    n = system.n_atoms
    thetas = (np.arange(spec.n_theta) + 0.5) * np.pi / spec.n_theta
    phis = (np.arange(spec.n_phi) + 0.5) * 2.0 * np.pi / spec.n_phi
    radial = np.array([coherent_amplitudes(n, t, 0.0).real for t in thetas])
    phases = np.exp(-1j * np.outer(system.m_values(), phis))
    overlap = radial @ (psi.amplitudes[:, None] * phases)
    values = np.abs(overlap) ** 2
    q_max = float(values.max())
    if spec.normalize:
        if q_max <= 0.0:
            raise ValueError("cannot normalize an identically zero Q function")
        values = values / q_max
    return QGrid(system, thetas, phis, values, spec.normalize, q_max)


def quadrature_norm(grid: QGrid) -> float:
    """Integral of Q over the sphere times (N+1)/(4 pi); 1 for any pure state."""
    values = grid.values * grid.q_max if grid.normalized else grid.values
    d_theta = np.pi / grid.n_theta
    d_phi = 2.0 * np.pi / grid.n_phi
    total = float(np.sum(values * np.sin(grid.thetas)[:, None]) * d_theta * d_phi)
    return total * (grid.system.dim) / (4.0 * np.pi)
