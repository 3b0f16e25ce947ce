"""Dicke-basis linear algebra for a collective spin of N two-level atoms.

All states live in the fully symmetric spin-s subspace with s = N/2 and
dimension N + 1.  Basis vectors are ordered by descending S_z eigenvalue,
so index k corresponds to m = s - k for k = 0 .. N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
NORM_TOL = 1e-12
UNIT_VECTOR_TOL = 1e-10
DEGENERACY_TOL = 1e-10
PARITY_TOL = 1e-9


@dataclass(frozen=True)
class SpinSystem:
    """Symmetric subspace of n_atoms two-level atoms."""

    n_atoms: int

    def __post_init__(self):
        if not isinstance(self.n_atoms, int) or self.n_atoms < 1:
            raise ValueError(f"n_atoms must be a positive integer, got {self.n_atoms!r}")

    @property
    def spin(self) -> float:
        return self.n_atoms / 2

    @property
    def dim(self) -> int:
        return self.n_atoms + 1

    def m_values(self) -> np.ndarray:
        """Projection labels m = s, s-1, ..., -s (descending, matches basis order)."""
        return self.spin - np.arange(self.dim)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(eq=False)
class Operator:
    """Matrix on the collective-spin space with a declared kind tag.

    kind is one of "hermitian", "unitary", "general"; the declared property
    is validated at construction (hermiticity to 1e-12, unitarity to 1e-10).
    Matrices are frozen read-only after construction.
    """

    system: SpinSystem
    matrix: np.ndarray
    kind: str = "general"
    _eig: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        d = self.system.dim
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dim {d}")
        if self.kind == "hermitian":
            err = np.abs(mat - mat.conj().T).max()
            if err > HERMITIAN_TOL:
                raise ValueError(f"declared hermitian but |M - M^dag| = {err:.3e}")
        elif self.kind == "unitary":
            err = np.abs(mat.conj().T @ mat - np.eye(d)).max()
            if err > UNITARY_TOL:
                raise ValueError(f"declared unitary but |M^dag M - 1| = {err:.3e}")
        elif self.kind != "general":
            raise ValueError(f"unknown operator kind {self.kind!r}")
        self.matrix = _readonly(mat)

    def dag(self) -> "Operator":
        return Operator(self.system, self.matrix.conj().T, self.kind)

    def eig(self):
        """Cached raw eigh decomposition (ascending eigenvalues); hermitian only."""
        if self.kind != "hermitian":
            raise ValueError("eigendecomposition requires a hermitian operator")
        if self._eig is None:
            vals, vecs = np.linalg.eigh(self.matrix)
            self._eig = (_readonly(vals), _readonly(vecs))
        return self._eig

    def expm_factor(self, scale: float) -> "Operator":
        """exp(-1j * scale * M) by spectral decomposition; hermitian only."""
        vals, vecs = self.eig()
        mat = (vecs * np.exp(-1j * scale * vals)) @ vecs.conj().T
        return Operator(self.system, mat, "unitary")

    def __matmul__(self, other):
        if isinstance(other, Operator):
            kind = "unitary" if self.kind == other.kind == "unitary" else "general"
            return Operator(self.system, self.matrix @ other.matrix, kind)
        if isinstance(other, StateVector):
            if self.kind != "unitary":
                raise ValueError("only unitary operators map states to states")
            return StateVector(self.system, self.matrix @ other.amplitudes)
        return self.matrix @ other


@dataclass(eq=False)
class StateVector:
    """Normalized pure state; amplitudes indexed by descending m."""

    system: SpinSystem
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amp.shape != (self.system.dim,):
            raise ValueError(f"amplitude shape {amp.shape} does not match dim {self.system.dim}")
        norm_err = abs(np.vdot(amp, amp).real - 1.0)
        if norm_err > NORM_TOL:
            raise ValueError(f"state not normalized, |<psi|psi> - 1| = {norm_err:.3e}")
        self.amplitudes = _readonly(amp)

    def normalized(self) -> "StateVector":
        amp = self.amplitudes / np.linalg.norm(self.amplitudes)
        return StateVector(self.system, amp)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def expectation(self, op: Operator) -> float:
        val = np.vdot(self.amplitudes, op.matrix @ self.amplitudes)
        return float(val.real) if op.kind == "hermitian" else complex(val)

    def variance(self, op: Operator) -> float:
        v = op.matrix @ self.amplitudes
        sq = np.vdot(v, v).real
        mean = np.vdot(self.amplitudes, v).real
        return float(sq - mean * mean)


@lru_cache(maxsize=None)
def _spin_matrices(n_atoms: int):
    s = n_atoms / 2
    m = s - np.arange(n_atoms + 1)
    # raising operator: <m+1|S+|m> = sqrt(s(s+1) - m(m+1)), columns k+1 -> rows k
    mcol = m[1:]
    ladder = np.sqrt(s * (s + 1) - mcol * (mcol + 1))
    sp = np.zeros((n_atoms + 1, n_atoms + 1), dtype=complex)
    sp[np.arange(n_atoms), np.arange(1, n_atoms + 1)] = ladder
    sm = sp.conj().T
    sx = (sp + sm) / 2
    sy = (sp - sm) / 2j
    sz = np.diag(m).astype(complex)
    return tuple(_readonly(a) for a in (sx, sy, sz))


def build_spin_operators(system: SpinSystem):
    """Collective operators (S_x, S_y, S_z) as hermitian Operators."""
    sx, sy, sz = _spin_matrices(system.n_atoms)
    return (Operator(system, sx, "hermitian"),
            Operator(system, sy, "hermitian"),
            Operator(system, sz, "hermitian"))


def spin_direction(system: SpinSystem, direction) -> Operator:
    """S_n = n . (S_x, S_y, S_z) for a unit 3-vector n."""
    vec = np.asarray(direction, dtype=float).reshape(3)
    norm_err = abs(np.linalg.norm(vec) - 1.0)
    if norm_err > UNIT_VECTOR_TOL:
        raise ValueError(f"direction must be a unit vector, |n| - 1 = {norm_err:.3e}")
    sx, sy, sz = _spin_matrices(system.n_atoms)
    return Operator(system, vec[0] * sx + vec[1] * sy + vec[2] * sz, "hermitian")


def _fix_column_phases(vecs: np.ndarray) -> np.ndarray:
    # convention: first component of largest magnitude made real positive
    out = np.array(vecs)
    for k in range(out.shape[1]):
        j = int(np.argmax(np.abs(out[:, k])))
        ph = out[j, k]
        out[:, k] *= ph.conjugate() / abs(ph)
    return out


def eigenbasis(op: Operator):
    """Eigenvalues (descending) and the unitary of phase-fixed eigenvectors.

    Column k of the returned unitary is the eigenvector for the k-th largest
    eigenvalue, with its largest-magnitude component made real positive.
    Deterministic: repeated calls on the same operator give identical output.
    """
    vals, vecs = op.eig()
    vals = vals[::-1].copy()
    vecs = _fix_column_phases(vecs[:, ::-1])
    return _readonly(vals), Operator(op.system, vecs, "unitary")


def min_eigenstate(op: Operator) -> StateVector:
    """Ground eigenvector of a hermitian operator; errors on degeneracy."""
    vals, basis = eigenbasis(op)
    gaps = vals - vals[-1]
    mult = int(np.sum(gaps < DEGENERACY_TOL))
    if mult > 1:
        raise ValueError(f"minimal eigenvalue is degenerate (multiplicity {mult})")
    return StateVector(op.system, basis.matrix[:, -1])


def max_eigenstate(op: Operator) -> StateVector:
    vals, basis = eigenbasis(op)
    if vals[0] - vals[1] < DEGENERACY_TOL:
        raise ValueError("maximal eigenvalue is degenerate")
    return StateVector(op.system, basis.matrix[:, 0])


def coherent_amplitudes(n_atoms: int, theta, varphi) -> np.ndarray:
    """Amplitudes of e^{i varphi S_z} e^{i theta S_y} |m = N/2>, vectorized.

    theta/varphi may be scalars or broadcastable arrays; the Dicke index runs
    along the last axis of the result.
    """
    theta = np.asarray(theta, dtype=float)[..., None]
    varphi = np.asarray(varphi, dtype=float)[..., None]
    s = n_atoms / 2
    k = np.arange(n_atoms + 1)
    m = s - k
    root_binom = np.sqrt([float(math.comb(n_atoms, int(j))) for j in k])
    amp = (root_binom
           * np.power(np.cos(theta / 2), n_atoms - k)
           * np.power(-np.sin(theta / 2), k)
           * np.exp(1j * varphi * m))
    return amp


def coherent_state(system: SpinSystem, theta: float, varphi: float) -> StateVector:
    """Spin coherent state e^{i varphi S_z} e^{i theta S_y} |m = N/2>.

    With this convention (theta, varphi) = (pi/2, 0) gives the minimal-S_x
    coherent state, <S_x> = -N/2.
    """
    amp = coherent_amplitudes(system.n_atoms, theta, varphi)
    return StateVector(system, amp)


@dataclass(frozen=True)
class BasisSpec:
    """Measurement basis, as a label plus optional rotation.

    label "sz" is the computational (Dicke) basis, "sx" the phase-fixed S_x
    eigenbasis, "rotated" applies exp(-1j * angle * axis . S) to the S_z
    eigenbasis.  Columns are ordered by descending projection eigenvalue.
    """

    label: str = "sx"
    axis: tuple[float, float, float] | None = None
    angle: float | None = None

    def __post_init__(self):
        if self.label not in ("sx", "sz", "rotated"):
            raise ValueError(f"unknown basis label {self.label!r}")
        if self.label == "rotated":
            if self.axis is None or self.angle is None:
                raise ValueError("rotated basis requires axis and angle")
            vec = np.asarray(self.axis, dtype=float)
            if abs(np.linalg.norm(vec) - 1.0) > UNIT_VECTOR_TOL:
                raise ValueError("rotation axis must be a unit vector")
        elif self.axis is not None or self.angle is not None:
            raise ValueError(f"basis {self.label!r} takes no rotation")

    @classmethod
    def along(cls, direction) -> "BasisSpec":
        """Basis measuring the spin projection along a unit 3-vector."""
        u = np.asarray(direction, dtype=float).reshape(3)
        if abs(np.linalg.norm(u) - 1.0) > UNIT_VECTOR_TOL:
            raise ValueError("measurement direction must be a unit vector")
        if u[2] > 1 - 1e-12:
            return cls(label="sz")
        if u[2] < -1 + 1e-12:
            return cls(label="rotated", axis=(0.0, 1.0, 0.0), angle=math.pi)
        axis = np.array([-u[1], u[0], 0.0])  # z cross u
        axis /= np.linalg.norm(axis)
        return cls(label="rotated", axis=tuple(axis), angle=math.acos(u[2]))


@lru_cache(maxsize=256)
def _basis_matrix_cached(n_atoms: int, spec: BasisSpec) -> np.ndarray:
    system = SpinSystem(n_atoms)
    if spec.label == "sz":
        return _readonly(np.eye(system.dim, dtype=complex))
    if spec.label == "sx":
        sx = build_spin_operators(system)[0]
        return eigenbasis(sx)[1].matrix
    gen = spin_direction(system, spec.axis)
    return gen.expm_factor(spec.angle).matrix


def basis_matrix(system: SpinSystem, spec: BasisSpec) -> Operator:
    """Unitary whose k-th column is the k-th measurement basis vector."""
    return Operator(system, _basis_matrix_cached(system.n_atoms, spec), "unitary")


def parity_operator(system: SpinSystem, spec: BasisSpec = BasisSpec(label="sz")) -> Operator:
    """Alternating-sign parity sum_k (-1)^k |b_k><b_k| over the basis columns."""
    b = _basis_matrix_cached(system.n_atoms, spec)
    signs = np.where(np.arange(system.dim) % 2 == 0, 1.0, -1.0)
    return Operator(system, (b * signs) @ b.conj().T, "hermitian")


@dataclass(frozen=True)
class ParityCheck:
    ok: bool
    residual: float


@dataclass(frozen=True)
class ParityReport:
    """Result of the three readout-certification conditions.

    state_parity: the input state is a parity eigenstate (index p in {0, 1}
    for eigenvalue (-1)^p, or None if the check failed).
    generator_flip: the encoding generator anticommutes with parity.
    readout_conserves: the readout unitary commutes with parity.
    When all three hold the classical Fisher information in this basis
    saturates the quantum bound in the small-angle limit.
    """

    state_parity: ParityCheck
    parity_index: int | None
    generator_flip: ParityCheck
    readout_conserves: ParityCheck
    tolerance: float

    @property
    def all_ok(self) -> bool:
        return self.state_parity.ok and self.generator_flip.ok and self.readout_conserves.ok


def check_parity_conditions(state: StateVector, generator: Operator,
                            readout: Operator | None, spec: BasisSpec,
                            tolerance: float = PARITY_TOL) -> ParityReport:
    """Check the three parity conditions for quantum-bound saturation."""
    system = state.system
    pi_op = parity_operator(system, spec).matrix

    v = pi_op @ state.amplitudes
    res_plus = float(np.linalg.norm(v - state.amplitudes))
    res_minus = float(np.linalg.norm(v + state.amplitudes))
    parity_res = min(res_plus, res_minus)
    parity_ok = parity_res <= tolerance
    parity_index = (0 if res_plus <= res_minus else 1) if parity_ok else None

    flip_res = float(np.abs(pi_op @ generator.matrix @ pi_op + generator.matrix).max())
    ro = readout.matrix if readout is not None else np.eye(system.dim)
    comm_res = float(np.abs(ro @ pi_op - pi_op @ ro).max())

    return ParityReport(
        state_parity=ParityCheck(parity_ok, parity_res),
        parity_index=parity_index,
        generator_flip=ParityCheck(flip_res <= tolerance, flip_res),
        readout_conserves=ParityCheck(comm_res <= tolerance, comm_res),
        tolerance=tolerance,
    )
