"""Twist-and-turn dynamics and the interferometric readout protocol.

The protocol is  |psi> = U2 U_phi U1 |psi0>  with U1 = exp(-i t1 H), a
phase encoding U_phi = exp(-i phi S_n), and a readout U2 that is either
absent, the time-reversed preparation exp(+i t2 H), or a same-sign echo
exp(-i t2 H).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .spin import (
    BasisSpec,
    Operator,
    SpinSystem,
    StateVector,
    UNIT_VECTOR_TOL,
    build_spin_operators,
    min_eigenstate,
    spin_direction,
)


class ReadoutKind(enum.Enum):
    NONE = "none"
    ECHO = "echo"
    ASYMMETRIC_ECHO = "asymmetric_echo"
    PSEUDO_ECHO = "pseudo_echo"


@dataclass(frozen=True)
class HamiltonianSpec:
    """Collective Hamiltonian chi S_z^2 - J S_x with J = N chi / lambda.

    kind "tnt" requires lambda_param > 0; kind "oat" is the J = 0 limit
    (lambda -> infinity) and takes no lambda_param.
    """

    system: SpinSystem
    kind: str = "tnt"
    chi: float = 1.0
    lambda_param: float | None = None

    def __post_init__(self):
        if self.kind not in ("tnt", "oat"):
            raise ValueError(f"unknown hamiltonian kind {self.kind!r}")
        if self.kind == "tnt":
            if self.lambda_param is None or self.lambda_param <= 0:
                raise ValueError("tnt requires lambda_param > 0")
        elif self.lambda_param is not None:
            raise ValueError("oat takes no lambda_param")

    @property
    def rotation_rate(self) -> float:
        """Linear-drive coefficient J."""
        if self.kind == "oat":
            return 0.0
        return self.system.n_atoms * self.chi / self.lambda_param


@lru_cache(maxsize=64)
def _hamiltonian_cached(spec: HamiltonianSpec) -> Operator:
    sx, _, sz = build_spin_operators(spec.system)
    mat = spec.chi * (sz.matrix @ sz.matrix) - spec.rotation_rate * sx.matrix
    return Operator(spec.system, mat, "hermitian")


def build_hamiltonian(spec: HamiltonianSpec) -> Operator:
    return _hamiltonian_cached(spec)


def propagator(hamiltonian: Operator, t: float) -> Operator:
    """exp(-1j * t * H) by exact spectral decomposition."""
    return hamiltonian.expm_factor(t)


@dataclass(frozen=True)
class ProtocolSpec:
    """Full readout protocol: preparation time, encoding, readout, basis."""

    hamiltonian: HamiltonianSpec
    t1: float
    readout: ReadoutKind = ReadoutKind.NONE
    t2: float = 0.0
    phi: float = 1e-4
    generator_dir: tuple[float, float, float] = (0.0, 1.0, 0.0)
    measurement: BasisSpec = BasisSpec(label="sx")

    def __post_init__(self):
        if self.t1 < 0 or self.t2 < 0:
            raise ValueError("evolution times must be nonnegative")
        if self.readout is ReadoutKind.NONE and self.t2 != 0.0:
            raise ValueError("trivial readout requires t2 = 0")
        if self.readout is ReadoutKind.ECHO and self.t2 != self.t1:
            raise ValueError("echo readout requires t2 = t1")
        if self.readout is ReadoutKind.ASYMMETRIC_ECHO and self.t2 == self.t1:
            raise ValueError("asymmetric echo requires t2 != t1 (use echo)")
        vec = np.asarray(self.generator_dir, dtype=float)
        if abs(np.linalg.norm(vec) - 1.0) > UNIT_VECTOR_TOL:
            raise ValueError("generator_dir must be a unit 3-vector")


def make_protocol(hamiltonian: HamiltonianSpec, t1: float,
                  readout: ReadoutKind = ReadoutKind.NONE, t2: float | None = None,
                  phi: float = 1e-4, generator_dir=(0.0, 1.0, 0.0),
                  measurement: BasisSpec = BasisSpec(label="sx")) -> ProtocolSpec:
    """ProtocolSpec with readout-appropriate default t2 (echo: t1, none: 0)."""
    if t2 is None:
        t2 = t1 if readout in (ReadoutKind.ECHO, ReadoutKind.ASYMMETRIC_ECHO,
                               ReadoutKind.PSEUDO_ECHO) else 0.0
    if readout is ReadoutKind.ASYMMETRIC_ECHO and t2 == t1:
        readout = ReadoutKind.ECHO
    return ProtocolSpec(hamiltonian=hamiltonian, t1=t1, readout=readout, t2=float(t2),
                        phi=phi, generator_dir=tuple(float(x) for x in generator_dir),
                        measurement=measurement)


def with_phase(spec: ProtocolSpec, phi: float) -> ProtocolSpec:
    return replace(spec, phi=phi)


@lru_cache(maxsize=64)
def _min_sx_state(n_atoms: int) -> StateVector:
    sx = build_spin_operators(SpinSystem(n_atoms))[0]
    return min_eigenstate(sx)


def ground_state(hamiltonian: HamiltonianSpec) -> StateVector:
    """Initial probe: minimal-S_x coherent eigenstate |<S_x> = -N/2>."""
    return _min_sx_state(hamiltonian.system.n_atoms)


def _evolve_amplitudes(h: Operator, t: float, vec: np.ndarray) -> np.ndarray:
    # exp(-1j t H) vec by spectral matvec, no full propagator matrix
    vals, vecs = h.eig()
    return vecs @ (np.exp(-1j * t * vals) * (vecs.conj().T @ vec))


@lru_cache(maxsize=512)
def _prepared_default(hamiltonian: HamiltonianSpec, t1: float) -> StateVector:
    psi0 = ground_state(hamiltonian)
    h = build_hamiltonian(hamiltonian)
    amp = _evolve_amplitudes(h, t1, psi0.amplitudes)
    return StateVector(hamiltonian.system, amp / np.linalg.norm(amp))


def prepared_state(spec: ProtocolSpec, psi0: StateVector | None = None) -> StateVector:
    """State after the entangling preparation, U1 |psi0>."""
    if psi0 is None:
        return _prepared_default(spec.hamiltonian, spec.t1)
    h = build_hamiltonian(spec.hamiltonian)
    amp = _evolve_amplitudes(h, spec.t1, psi0.amplitudes)
    return StateVector(spec.hamiltonian.system, amp / np.linalg.norm(amp))


def readout_unitary(spec: ProtocolSpec) -> Operator | None:
    """U2 for the protocol, or None for the trivial readout."""
    if spec.readout is ReadoutKind.NONE:
        return None
    h = build_hamiltonian(spec.hamiltonian)
    if spec.readout is ReadoutKind.PSEUDO_ECHO:
        return propagator(h, spec.t2)
    # echo and asymmetric echo are time-reversed: exp(+1j t2 H)
    return propagator(h, -spec.t2)


@lru_cache(maxsize=256)
def _direction_eig(n_atoms: int, direction: tuple[float, float, float]):
    gen = spin_direction(SpinSystem(n_atoms), direction)
    return gen.eig()


def phase_unitary(system: SpinSystem, direction, phi: float) -> Operator:
    """Encoding rotation exp(-1j * phi * S_n)."""
    vals, vecs = _direction_eig(system.n_atoms, tuple(float(x) for x in direction))
    mat = (vecs * np.exp(-1j * phi * vals)) @ vecs.conj().T
    return Operator(system, mat, "unitary")


def _encode(spec: ProtocolSpec, pre: np.ndarray, phi: float):
    """Amplitudes of U_phi U1 psi0 and their phi-derivative, before U2."""
    system = spec.hamiltonian.system
    vals, vecs = _direction_eig(system.n_atoms, spec.generator_dir)
    rotated = vecs @ (np.exp(-1j * phi * vals) * (vecs.conj().T @ pre))
    sn = spin_direction(system, spec.generator_dir).matrix
    return rotated, -1j * (sn @ rotated)


def final_state_and_derivative(spec: ProtocolSpec, psi0: StateVector | None = None,
                               phi: float | None = None):
    """Protocol output amplitudes and d/dphi amplitudes at the given phase.

    The derivative is exact: d/dphi U_phi = -1j S_n U_phi, and U2 does not
    depend on phi.
    """
    if phi is None:
        phi = spec.phi
    pre = prepared_state(spec, psi0)
    psi, dpsi = _encode(spec, pre.amplitudes, phi)
    if spec.readout is not ReadoutKind.NONE:
        h = build_hamiltonian(spec.hamiltonian)
        t2 = spec.t2 if spec.readout is ReadoutKind.PSEUDO_ECHO else -spec.t2
        psi = _evolve_amplitudes(h, t2, psi)
        dpsi = _evolve_amplitudes(h, t2, dpsi)
    return psi, dpsi


def run_protocol(spec: ProtocolSpec, psi0: StateVector | None = None) -> StateVector:
    """Final protocol state U2 U_phi U1 |psi0>, renormalized."""
    psi, _ = final_state_and_derivative(spec, psi0)
    return StateVector(spec.hamiltonian.system, psi / np.linalg.norm(psi))


def mean_spin(psi: StateVector) -> np.ndarray:
    """Bloch vector (<S_x>, <S_y>, <S_z>)."""
    ops = build_spin_operators(psi.system)
    return np.array([psi.expectation(op) for op in ops])
