"""Linear-algebra substrate for a pair of spin-1/2 particles.

States live in the four-dimensional product space with basis ordered
(up-up, up-down, down-up, down-down).  Rotations are generated by the
half-Pauli spin operators via R_axis(angle) = exp(i * angle * I_axis),
so R_y(theta) has rows [cos(t/2), sin(t/2); -sin(t/2), cos(t/2)].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

# 1e-12 for exact-arithmetic identities, 1e-9 for composed pipelines.
EXACT_TOL = 1e-12
PIPELINE_TOL = 1e-9


class BasisLabel(enum.Enum):
    """Product-basis label; values are the canonical indices 0..3."""

    UU = 0
    UD = 1
    DU = 2
    DD = 3

    @property
    def index(self) -> int:
        return self.value

    @property
    def spin1(self) -> str:
        return "up" if self.value in (0, 1) else "down"

    @property
    def spin2(self) -> str:
        return "up" if self.value in (0, 2) else "down"

    @property
    def arrows(self) -> str:
        return ("↑" if self.spin1 == "up" else "↓") + (
            "↑" if self.spin2 == "up" else "↓"
        )

    @property
    def short(self) -> str:
        return ("u" if self.spin1 == "up" else "d") + ("u" if self.spin2 == "up" else "d")

    @classmethod
    def from_index(cls, index: int) -> "BasisLabel":
        return cls(index)

    @classmethod
    def from_string(cls, text: str) -> "BasisLabel":
        table = {label.short: label for label in cls}
        key = text.strip().lower()
        if key not in table:
            raise ValueError(f"unknown basis label {text!r}; expected one of uu, ud, du, dd")
        return table[key]


def _frozen_array(data, shape) -> np.ndarray:
    arr = np.array(data, dtype=complex)
    if arr.shape != shape:
        raise ValueError(f"expected array of shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Ket4:
    """State vector of the two-spin system in the product basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen_array(self.amplitudes, (4,)))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "Ket4":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return Ket4(self.amplitudes / n)


@dataclass(frozen=True, eq=False)
class Operator4:
    """4x4 operator; the unitary flag is validated at construction."""

    matrix: np.ndarray
    unitary: bool = True

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen_array(self.matrix, (4, 4)))
        if self.unitary:
            defect = np.abs(self.matrix @ self.matrix.conj().T - np.eye(4)).max()
            if defect >= EXACT_TOL:
                raise ValueError(f"matrix flagged unitary deviates from unitarity by {defect:.3e}")

    def adjoint(self) -> "Operator4":
        return Operator4(self.matrix.conj().T, unitary=self.unitary)


@dataclass(frozen=True, eq=False)
class ReducedState:
    """Single-spin density matrix obtained by a partial trace."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen_array(self.entries, (2, 2)))
        m = self.entries
        if np.abs(m - m.conj().T).max() >= EXACT_TOL:
            raise ValueError("reduced state must be Hermitian")
        if abs(m.trace() - 1.0) >= EXACT_TOL:
            raise ValueError("reduced state must have trace 1")
        eigs = np.linalg.eigvalsh(m)
        if eigs.min() < -EXACT_TOL or eigs.max() > 1.0 + EXACT_TOL:
            raise ValueError("reduced-state eigenvalues must lie in [0, 1]")


class PhaseMatch(NamedTuple):
    equal: bool
    phase: complex | None


class Measurement(NamedTuple):
    probabilities: dict
    argmax: BasisLabel


def ket_from_basis(label: BasisLabel) -> Ket4:
    """Unit vector with amplitude 1 at the label's canonical index."""
    amps = np.zeros(4, dtype=complex)
    amps[label.index] = 1.0
    return Ket4(amps)


def rotation_2x2(axis: str, angle: float) -> np.ndarray:
    """exp(i * angle * I_axis) for the half-Pauli spin operators."""
    if not np.isfinite(angle):
        raise ValueError("rotation angle must be finite")
    c = np.cos(angle / 2.0)
    s = np.sin(angle / 2.0)
    if axis == "x":
        return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)
    if axis == "y":
        return np.array([[c, s], [-s, c]], dtype=complex)
    if axis == "z":
        return np.array([[np.exp(1j * angle / 2.0), 0.0], [0.0, np.exp(-1j * angle / 2.0)]])
    raise ValueError(f"unknown rotation axis {axis!r}; expected x, y, or z")


def single_spin_rotation(spin: int, axis: str, angle: float) -> Operator4:
    """Rotation of one spin embedded in the two-spin space."""
    r = rotation_2x2(axis, angle)
    eye = np.eye(2, dtype=complex)
    if spin == 1:
        return Operator4(np.kron(r, eye))
    if spin == 2:
        return Operator4(np.kron(eye, r))
    raise ValueError(f"spin must be 1 or 2, got {spin!r}")


def identity() -> Operator4:
    return Operator4(np.eye(4, dtype=complex))


def apply(op: Operator4, state: Ket4) -> Ket4:
    """Matrix-vector product; only unitary operators may act on states."""
    if not op.unitary:
        raise ValueError("refusing to apply an operator whose unitary flag is unset")
    return Ket4(op.matrix @ state.amplitudes)


def compose(ops: Iterable[Operator4]) -> Operator4:
    """Product of operators; the last list element acts first on a state."""
    ops = list(ops)
    if not ops:
        raise ValueError("compose requires at least one operator")
    matrix = ops[0].matrix
    for op in ops[1:]:
        matrix = matrix @ op.matrix
    return Operator4(matrix, unitary=all(op.unitary for op in ops))


def scaled(op: Operator4, factor: complex) -> Operator4:
    """Scalar multiple; the unitary flag survives only unit-modulus factors."""
    stays_unitary = op.unitary and abs(abs(factor) - 1.0) <= EXACT_TOL
    return Operator4(np.asarray(factor) * op.matrix, unitary=stays_unitary)


def _raw(obj) -> np.ndarray:
    for attr in ("amplitudes", "matrix", "coords", "entries"):
        if hasattr(obj, attr):
            return np.asarray(getattr(obj, attr))
    return np.asarray(obj, dtype=complex)


def equal_up_to_phase(a, b, tol: float = EXACT_TOL) -> PhaseMatch:
    """Test a = phase * b entrywise for some unit scalar phase.

    Works on Ket4, Operator4, Bell-coordinate vectors, or bare arrays,
    as long as both arguments are the same kind of object.  The phase
    is read off the largest-magnitude entry of b, which keeps the
    extraction deterministic and well conditioned.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if not isinstance(a, np.ndarray) and not isinstance(b, np.ndarray):
        if type(a) is not type(b):
            raise TypeError(f"cannot compare {type(a).__name__} with {type(b).__name__}")
    va, vb = _raw(a), _raw(b)
    if va.shape != vb.shape:
        raise ValueError(f"shape mismatch: {va.shape} vs {vb.shape}")
    flat_b = vb.ravel()
    pivot = int(np.argmax(np.abs(flat_b)))
    if abs(flat_b[pivot]) == 0.0:
        raise ValueError("reference object is zero; phase comparison is undefined")
    lam = va.ravel()[pivot] / flat_b[pivot]
    if abs(abs(lam) - 1.0) > tol:
        return PhaseMatch(False, None)
    if np.abs(va - lam * vb).max() > tol:
        return PhaseMatch(False, None)
    return PhaseMatch(True, complex(lam))


def partial_trace(state: Ket4, keep: int) -> ReducedState:
    """Reduced density matrix of one spin, tracing out the other."""
    psi = state.amplitudes.reshape(2, 2)
    if keep == 1:
        rho = np.einsum("ab,cb->ac", psi, psi.conj())
    elif keep == 2:
        rho = np.einsum("ab,ac->bc", psi, psi.conj())
    else:
        raise ValueError(f"keep must be 1 or 2, got {keep!r}")
    return ReducedState(rho)


def measure_basis(state: Ket4) -> Measurement:
    """Born-rule probabilities; argmax ties break toward the lowest index."""
    probs = np.abs(state.amplitudes) ** 2
    table = {label: float(probs[label.index]) for label in BasisLabel}
    # np.argmax returns the first maximum, which is the lowest canonical index.
    winner = BasisLabel.from_index(int(np.argmax(probs)))
    return Measurement(table, winner)
