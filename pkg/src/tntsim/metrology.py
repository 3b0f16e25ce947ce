"""Measurement statistics and information measures for the readout protocol.

Covers projection-noise distributions with Gaussian detection blur, the
classical Fisher information of the blurred distribution, the quantum
Fisher information of pure states, Wineland squeezing, and Hellinger
distances between outcome distributions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dynamics import ProtocolSpec, final_state_and_derivative, prepared_state
from .spin import BasisSpec, Operator, SpinSystem, StateVector, basis_matrix, build_spin_operators

PROB_FLOOR = -1e-14
PROB_SUM_TOL = 1e-10
CFI_TERM_EPS = 1e-12
DROPPED_MASS_LIMIT = 1e-6
SIGMA_PASSTHROUGH = 1e-6
MEAN_SPIN_FLOOR = 1e-9
FD_STEP = 1e-6


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian detection blur of rms width sigma, in units of m."""

    sigma: float = 0.0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    @property
    def active(self) -> bool:
        return self.sigma >= SIGMA_PASSTHROUGH


@dataclass(eq=False)
class ProbDist:
    """Outcome labels m (descending), probabilities, and the applied blur."""

    outcomes: np.ndarray
    probs: np.ndarray
    noise_sigma: float = 0.0

    def __post_init__(self):
        out = np.asarray(self.outcomes, dtype=float)
        p = np.array(self.probs, dtype=float)
        if out.shape != p.shape or out.ndim != 1:
            raise ValueError("outcomes and probs must be matching 1d arrays")
        if p.min() < PROB_FLOOR:
            raise ValueError(f"probability below floor: {p.min():.3e}")
        p = np.clip(p, 0.0, None)
        if abs(p.sum() - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {p.sum():.15f}")
        p.setflags(write=False)
        out.setflags(write=False)
        self.outcomes = out
        self.probs = p


@dataclass(frozen=True)
class FisherResult:
    """Classical Fisher information with its evaluation point and method."""

    value: float
    phi_eval: float
    method: str
    dropped_mass: float = 0.0


@lru_cache(maxsize=128)
def _noise_kernel(dim: int, sigma: float) -> np.ndarray:
    # column-normalized Gaussian over the N+1 physical outcomes, no tails
    idx = np.arange(dim)
    d2 = (idx[:, None] - idx[None, :]).astype(float) ** 2
    w = np.exp(-d2 / (2.0 * sigma * sigma))
    w /= w.sum(axis=0, keepdims=True)
    w.setflags(write=False)
    return w


def noise_kernel(system: SpinSystem, noise: NoiseModel) -> np.ndarray | None:
    """Convolution matrix acting on probability vectors, or None if inactive."""
    if not noise.active:
        return None
    return _noise_kernel(system.dim, noise.sigma)


def measurement_probs(psi: StateVector, spec: BasisSpec) -> ProbDist:
    """Projection probabilities |<b_k|psi>|^2 in the given basis."""
    b = basis_matrix(psi.system, spec)
    amps = b.matrix.conj().T @ psi.amplitudes
    return ProbDist(psi.system.m_values(), np.abs(amps) ** 2)


def convolve_noise(dist: ProbDist, noise: NoiseModel) -> ProbDist:
    """Apply the Gaussian blur kernel; below-threshold sigma is a passthrough."""
    if not noise.active:
        return ProbDist(dist.outcomes, dist.probs, noise.sigma)
    kernel = _noise_kernel(len(dist.probs), noise.sigma)
    return ProbDist(dist.outcomes, kernel @ dist.probs, noise.sigma)


def _fisher_sum(probs: np.ndarray, dprobs: np.ndarray) -> tuple[float, float]:
    keep = probs >= CFI_TERM_EPS
    value = float(np.sum(dprobs[keep] ** 2 / probs[keep]))
    dropped = float(np.sum(probs[~keep]))
    return value, dropped


def _blur(kernel: np.ndarray | None, vec: np.ndarray) -> np.ndarray:
    return vec if kernel is None else kernel @ vec


def cfi(spec: ProtocolSpec, psi0: StateVector | None = None,
        noise: NoiseModel = NoiseModel(), phi_eval: float | None = None,
        method: str = "analytic") -> FisherResult:
    """Classical Fisher information of the blurred outcome distribution.

    The analytic method differentiates the amplitudes exactly through
    d/dphi exp(-1j phi S_n) = -1j S_n exp(-1j phi S_n); the blur is linear
    so it commutes with the derivative.  The fd method uses a central
    difference with step 1e-6.  Terms with blurred probability below 1e-12
    are dropped; their total mass is reported and a warning is raised if it
    exceeds 1e-6.  phi_eval = 0 is rejected when the distribution has
    exact zeros there (information hides in vanishing-probability outcomes).
    """
    if phi_eval is None:
        phi_eval = spec.phi
    if method not in ("analytic", "fd"):
        raise ValueError(f"unknown cfi method {method!r}")
    system = spec.hamiltonian.system
    b = basis_matrix(system, spec.measurement).matrix
    kernel = noise_kernel(system, noise)

    psi, dpsi = final_state_and_derivative(spec, psi0, phi=phi_eval)
    amps = b.conj().T @ psi
    probs = _blur(kernel, np.abs(amps) ** 2)

    if phi_eval == 0.0 and probs.min() < CFI_TERM_EPS:
        raise ValueError("phi_eval = 0 with vanishing outcomes; evaluate at small nonzero phi")

    if method == "analytic":
        damps = b.conj().T @ dpsi
        dprobs = _blur(kernel, 2.0 * np.real(np.conj(amps) * damps))
    else:
        h = FD_STEP
        plus, _ = final_state_and_derivative(spec, psi0, phi=phi_eval + h)
        minus, _ = final_state_and_derivative(spec, psi0, phi=phi_eval - h)
        p_plus = _blur(kernel, np.abs(b.conj().T @ plus) ** 2)
        p_minus = _blur(kernel, np.abs(b.conj().T @ minus) ** 2)
        dprobs = (p_plus - p_minus) / (2.0 * h)

    value, dropped = _fisher_sum(probs, dprobs)
    if dropped > DROPPED_MASS_LIMIT:
        warnings.warn(f"dropped-term mass {dropped:.3e} exceeds {DROPPED_MASS_LIMIT:.0e}; "
                      "evaluation may sit too close to a parity zero", stacklevel=2)
    return FisherResult(value=value, phi_eval=phi_eval, method=method, dropped_mass=dropped)


def protocol_probs(spec: ProtocolSpec, psi0: StateVector | None = None,
                   noise: NoiseModel = NoiseModel(), phi: float | None = None) -> ProbDist:
    """Outcome distribution of the full protocol at the given phase."""
    system = spec.hamiltonian.system
    b = basis_matrix(system, spec.measurement).matrix
    psi, _ = final_state_and_derivative(spec, psi0, phi=spec.phi if phi is None else phi)
    dist = ProbDist(system.m_values(), np.abs(b.conj().T @ psi) ** 2)
    return convolve_noise(dist, noise)


def spin_covariance(psi: StateVector) -> np.ndarray:
    """Symmetrized 3x3 covariance of (S_x, S_y, S_z)."""
    ops = build_spin_operators(psi.system)
    vs = [op.matrix @ psi.amplitudes for op in ops]
    means = np.array([np.vdot(psi.amplitudes, v).real for v in vs])
    cov = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            cov[i, j] = cov[j, i] = np.vdot(vs[i], vs[j]).real - means[i] * means[j]
    return cov


def _max_eigpair(mat: np.ndarray) -> tuple[float, np.ndarray]:
    vals, vecs = np.linalg.eigh(mat)
    vec = vecs[:, -1]
    j = int(np.argmax(np.abs(vec)))
    if vec[j] < 0:
        vec = -vec
    return float(vals[-1]), vec


def qfi_pure(psi: StateVector) -> tuple[float, np.ndarray]:
    """Quantum Fisher information 4 * max Var(S_n) and the optimal direction.

    For a pure probe and unitary encoding the QFI over rotation directions
    is four times the largest eigenvalue of the spin covariance matrix.
    """
    val, vec = _max_eigpair(spin_covariance(psi))
    return 4.0 * val, vec


def optimal_generator_direction(psi: StateVector, plane: str = "yz") -> tuple[float, float, float]:
    """QFI-optimal encoding direction restricted to a coordinate plane.

    States evolved from the minimal-S_x probe keep a covariance that is
    block diagonal between x and the y-z plane, so the in-plane restriction
    is exact for them and keeps the direction orthogonal to S_x.
    """
    if plane != "yz":
        raise ValueError("only the y-z plane restriction is supported")
    cov = spin_covariance(psi)
    _, vec2 = _max_eigpair(cov[1:, 1:])
    return (0.0, float(vec2[0]), float(vec2[1]))


def squeezing_gain(psi: StateVector) -> tuple[float, float]:
    """Wineland parameter xi^2 = N min Var(S_perp) / |<S>|^2 and gain 1/xi^2.

    The minimization runs over directions transverse to the mean spin; it
    reduces to the smaller eigenvalue of the 2x2 transverse covariance
    block.  Errors when the mean spin length vanishes.
    """
    ops = build_spin_operators(psi.system)
    mean = np.array([psi.expectation(op) for op in ops])
    length = np.linalg.norm(mean)
    if length <= MEAN_SPIN_FLOOR:
        raise ValueError("mean spin vanishes; squeezing parameter undefined")
    n_mean = mean / length
    helper = np.array([0.0, 0.0, 1.0])
    if abs(np.dot(helper, n_mean)) > 1 - 1e-9:
        helper = np.array([1.0, 0.0, 0.0])
    e1 = np.cross(n_mean, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n_mean, e1)
    frame = np.stack([e1, e2])
    cov2 = frame @ spin_covariance(psi) @ frame.T
    var_min = float(np.linalg.eigvalsh(cov2)[0])
    xi2 = psi.system.n_atoms * var_min / (length * length)
    return xi2, 1.0 / xi2


def hellinger_distance_sq(p: ProbDist, q: ProbDist) -> float:
    """Squared Hellinger distance 1 - sum sqrt(p q) on a shared outcome grid."""
    if not np.array_equal(p.outcomes, q.outcomes):
        raise ValueError("distributions live on different outcome grids")
    d2 = 1.0 - float(np.sum(np.sqrt(p.probs * q.probs)))
    return min(max(d2, 0.0), 1.0)


def hellinger_cfi_estimate(spec: ProtocolSpec, psi0: StateVector | None = None,
                           noise: NoiseModel = NoiseModel(), dphi: float = 1e-3) -> float:
    """CFI estimate 8 d_H^2(P_0, P_dphi) / dphi^2 from the small-phase expansion."""
    if dphi <= 0:
        raise ValueError("dphi must be positive")
    p0 = protocol_probs(spec, psi0, noise, phi=0.0)
    p1 = protocol_probs(spec, psi0, noise, phi=dphi)
    return 8.0 * hellinger_distance_sq(p0, p1) / dphi**2
