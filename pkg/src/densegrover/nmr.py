"""Pulse-level realization on a heteronuclear two-spin system.

Gates become sequences of on-resonance rf pulses, scalar-coupling
delays, and z-gradient crushes, simulated in the doubly-rotating
frame where only the coupling term 2*pi*J*Iz1*Iz2 evolves between
pulses.  Mixed states are carried as traceless deviation matrices;
the gradient is modeled as a full crush of off-diagonal entries.

Pulse text format, one element per line, applied top to bottom:

    rf <spin|both> <x|y> <angle_expr>     angle_expr like pi/4, -3pi/4, or a float (radians)
    delay <expr>                          expr like 1/4J, or a float (seconds)
    grad z
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .grover import phase_shift_s, preset, sign_flip_target
from .qstate import BasisLabel, Operator4, _frozen_array, rotation_2x2
from . import coding
from . import grover

_IZ = np.diag([0.5, -0.5]).astype(complex)
_I2 = np.eye(2, dtype=complex)
IZ1 = np.kron(_IZ, _I2)
IZ2 = np.kron(_I2, _IZ)
IZIZ = np.kron(_IZ, _IZ)


@dataclass(frozen=True)
class PhysicalConstants:
    """Spectrometer constants; gamma_ratio defaults to nu2/nu1."""

    nu1_hz: float = 125.76e6
    nu2_hz: float = 500.13e6
    j_hz: float = 215.0
    gamma_ratio: float | None = None

    def __post_init__(self):
        for field in ("nu1_hz", "nu2_hz"):
            if not getattr(self, field) > 0:
                raise ValueError(f"{field} must be positive")
        if self.gamma_ratio is None:
            object.__setattr__(self, "gamma_ratio", self.nu2_hz / self.nu1_hz)
        if not self.gamma_ratio > 0:
            raise ValueError("gamma_ratio must be positive")
        # An uncoupled pair (J = 0) is a valid frame even though the
        # J-relative delay expressions cannot be resolved in it.
        if not self.j_hz >= 0:
            raise ValueError("j_hz must be nonnegative")


DEFAULT_CONSTANTS = PhysicalConstants()

_ANGLE_RE = re.compile(r"^([+-]?)(\d*)pi(?:/(\d+))?$")
_DELAY_RE = re.compile(r"^(\d+)/(\d*)J$")


def parse_angle(expr: str) -> float:
    """Radians from an expression like pi/4, -3pi/4, pi, or a float literal."""
    m = _ANGLE_RE.match(expr)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = int(m.group(2)) if m.group(2) else 1
        den = int(m.group(3)) if m.group(3) else 1
        if den == 0:
            raise ValueError(f"zero denominator in angle expression {expr!r}")
        return sign * num * np.pi / den
    try:
        return float(expr)
    except ValueError:
        raise ValueError(f"cannot parse angle expression {expr!r}") from None


def pi_fraction(num: int, den: int = 1) -> str:
    """Canonical angle expression for num*pi/den."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    sign = "-" if num < 0 else ""
    n = abs(num)
    head = "pi" if n == 1 else f"{n}pi"
    return f"{sign}{head}" + ("" if den == 1 else f"/{den}")


@dataclass(frozen=True)
class Rf:
    """On-resonance pulse; spin is 1, 2, or "both" for a hard pulse.

    The angle is kept as its source expression so sequences round-trip
    through the text format bit-exactly.
    """

    spin: object
    axis: str
    angle: str

    def __post_init__(self):
        if self.spin not in (1, 2, "both"):
            raise ValueError(f"rf spin must be 1, 2, or 'both', got {self.spin!r}")
        if self.axis not in ("x", "y"):
            raise ValueError(f"rf axis must be x or y, got {self.axis!r}")
        parse_angle(self.angle)

    @property
    def angle_rad(self) -> float:
        return parse_angle(self.angle)


@dataclass(frozen=True)
class Delay:
    """Free evolution under the coupling; duration like 1/4J or seconds."""

    duration: str

    def __post_init__(self):
        if self.seconds(DEFAULT_CONSTANTS) < 0:
            raise ValueError(f"delay must be nonnegative, got {self.duration!r}")

    def seconds(self, consts: PhysicalConstants) -> float:
        m = _DELAY_RE.match(self.duration)
        if m:
            num = int(m.group(1))
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise ValueError(f"zero denominator in delay expression {self.duration!r}")
            return num / (den * consts.j_hz)
        try:
            return float(self.duration)
        except ValueError:
            raise ValueError(f"cannot parse delay expression {self.duration!r}") from None


@dataclass(frozen=True)
class Gradient:
    """Field-gradient crush along z; destroys all coherences in the model."""

    axis: str = "z"

    def __post_init__(self):
        if self.axis != "z":
            raise ValueError(f"gradient axis must be z, got {self.axis!r}")


@dataclass(frozen=True)
class PulseSequence:
    """Ordered pulse elements, applied left to right."""

    elements: tuple

    def __post_init__(self):
        elements = tuple(self.elements)
        for e in elements:
            if not isinstance(e, (Rf, Delay, Gradient)):
                raise TypeError(f"unsupported pulse element {e!r}")
        object.__setattr__(self, "elements", elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        return PulseSequence(self.elements + tuple(other))

    def to_text(self) -> str:
        lines = []
        for e in self.elements:
            if isinstance(e, Rf):
                lines.append(f"rf {e.spin} {e.axis} {e.angle}")
            elif isinstance(e, Delay):
                lines.append(f"delay {e.duration}")
            else:
                lines.append(f"grad {e.axis}")
        return "\n".join(lines) + ("\n" if lines else "")


def parse_sequence(text: str) -> PulseSequence:
    """Parse the pulse text format; inverse of PulseSequence.to_text."""
    elements = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] == "rf" and len(tokens) == 4:
                spin = tokens[1] if tokens[1] == "both" else int(tokens[1])
                elements.append(Rf(spin, tokens[2], tokens[3]))
            elif tokens[0] == "delay" and len(tokens) == 2:
                elements.append(Delay(tokens[1]))
            elif tokens[0] == "grad" and len(tokens) == 2:
                elements.append(Gradient(tokens[1]))
            else:
                raise ValueError(f"unrecognized pulse line {line!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return PulseSequence(tuple(elements))


@dataclass(frozen=True, eq=False)
class DeviationMatrix:
    """Traceless Hermitian 4x4 matrix carrying the observable signal."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen_array(self.entries, (4, 4)))
        m = self.entries
        if np.abs(m - m.conj().T).max() >= 1e-12:
            raise ValueError("deviation matrix must be Hermitian")
        if abs(m.trace()) >= 1e-12:
            raise ValueError("deviation matrix must be traceless")


def hamiltonian(consts: PhysicalConstants, frame: str = "doubly-rotating") -> Operator4:
    """Hermitian generator in rad/s; the simulation uses the rotating frame."""
    coupling = 2 * np.pi * consts.j_hz * IZIZ
    if frame == "doubly-rotating":
        return Operator4(coupling, unitary=False)
    if frame == "lab":
        zeeman = -2 * np.pi * consts.nu1_hz * IZ1 - 2 * np.pi * consts.nu2_hz * IZ2
        return Operator4(zeeman + coupling, unitary=False)
    raise ValueError(f"frame must be 'lab' or 'doubly-rotating', got {frame!r}")


def element_unitary(e, consts: PhysicalConstants = DEFAULT_CONSTANTS) -> np.ndarray:
    """Unitary matrix of one rf pulse or delay; gradients have none."""
    if isinstance(e, Rf):
        angle = e.angle_rad
        r = rotation_2x2(e.axis, angle)
        if e.spin == "both":
            return np.kron(r, r)
        if e.spin == 1:
            return np.kron(r, _I2)
        return np.kron(_I2, r)
    if isinstance(e, Delay):
        tau = e.seconds(consts)
        if tau < 0:
            raise ValueError("delay must be nonnegative")
        return np.diag(np.exp(-2j * np.pi * consts.j_hz * tau * np.diag(IZIZ)))
    raise ValueError("a gradient pulse has no unitary representation")


def element_channel(e, consts: PhysicalConstants = DEFAULT_CONSTANTS) -> Callable:
    """The element's action on deviation matrices."""
    if isinstance(e, Gradient):
        def channel(rho: DeviationMatrix) -> DeviationMatrix:
            return DeviationMatrix(np.diag(np.diag(rho.entries)))
    else:
        u = element_unitary(e, consts)
        def channel(rho: DeviationMatrix) -> DeviationMatrix:
            return DeviationMatrix(u @ rho.entries @ u.conj().T)
    return channel


def simulate_sequence(
    seq: PulseSequence,
    rho0: DeviationMatrix,
    consts: PhysicalConstants = DEFAULT_CONSTANTS,
) -> DeviationMatrix:
    """Fold the element channels over rho0, left to right."""
    rho = rho0
    for e in seq:
        rho = element_channel(e, consts)(rho)
    return rho


def _rf(spin, axis, num, den=1) -> Rf:
    return Rf(spin, axis, pi_fraction(num, den))


def _u_pulses(j: int) -> list:
    angles = {1: 3, 2: -3, 4: -1}
    if j == 3:
        return [_rf("both", "y", 1, 4)]
    return [_rf(1, "y", 1, 4), _rf(2, "y", angles[j], 4)]


def _u_inverse_pulses(j: int) -> list:
    angles = {1: -3, 2: 3, 4: 1}
    if j == 3:
        return [_rf("both", "y", -1, 4)]
    return [_rf(1, "y", -1, 4), _rf(2, "y", angles[j], 4)]


def _refocused_half_j() -> list:
    # Equivalent to the coupled-spin evolution [1/2J]; the opposite-phase
    # hard pulses cancel calibration errors on real hardware.
    return [Delay("1/4J"), _rf("both", "x", 1), Delay("1/4J"), _rf("both", "x", -1)]


def alpha_angle(consts: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Initial proton flip angle arccos(gamma1 / (2 gamma2)) for the prep."""
    return float(np.arccos(1.0 / (2.0 * consts.gamma_ratio)))


_GATE_NAMES = (
    "U1", "U2", "U3", "U4",
    "U1-inv", "U2-inv", "U3-inv", "U4-inv",
    "I_t", "I_s", "V2", "V3", "V4",
    "pseudo-pure-prep", "readout-carbon", "readout-proton",
)


def gate_library(
    name: str,
    kind: str = "y",
    consts: PhysicalConstants = DEFAULT_CONSTANTS,
) -> PulseSequence:
    """Pulse realization of a named gate (y-kind presets only)."""
    if kind != "y":
        raise ValueError("the pulse library covers only the y-kind presets")
    if name in ("U1", "U2", "U3", "U4"):
        return PulseSequence(tuple(_u_pulses(int(name[1]))))
    if name in ("U1-inv", "U2-inv", "U3-inv", "U4-inv"):
        return PulseSequence(tuple(_u_inverse_pulses(int(name[1]))))
    if name == "I_t":
        return PulseSequence((Delay("1/2J"), _rf("both", "x", 1), Delay("1/2J"), _rf("both", "x", -1)))
    if name == "I_s":
        return PulseSequence(tuple(
            _refocused_half_j()
            + [_rf("both", "y", -1, 2), _rf("both", "x", -1, 2), _rf("both", "y", 1, 2)]
        ))
    if name == "V2":
        return PulseSequence((_rf(2, "x", 1), _rf(2, "y", -1, 2)))
    if name == "V3":
        return PulseSequence((_rf(2, "x", 1), _rf(2, "y", 1, 2)))
    if name == "V4":
        return PulseSequence((_rf(2, "y", 1),))
    if name == "pseudo-pure-prep":
        return PulseSequence(tuple(
            [Rf(2, "x", repr(alpha_angle(consts))), Gradient(), _rf(1, "x", 1, 4)]
            + _refocused_half_j()
            + [_rf(1, "y", -1, 4), Gradient()]
        ))
    if name == "readout-carbon":
        return PulseSequence((_rf(1, "y", 1, 2),))
    if name == "readout-proton":
        return PulseSequence((_rf(2, "y", 1, 2),))
    raise ValueError(f"unknown gate {name!r}; known gates: {', '.join(_GATE_NAMES)}")


def ideal_gate_unitary(name: str, kind: str = "y") -> Operator4:
    """The exact operator a library gate is meant to realize."""
    if name in ("U1", "U2", "U3", "U4"):
        return grover.build_U(preset(kind, int(name[1])))
    if name in ("U1-inv", "U2-inv", "U3-inv", "U4-inv"):
        return grover.build_U(preset(kind, int(name[1]))).adjoint()
    if name == "I_t":
        return sign_flip_target()
    if name == "I_s":
        return phase_shift_s()
    if name in ("V2", "V3", "V4"):
        return coding.encoder(kind, int(name[1]))
    raise ValueError(f"gate {name!r} has no unitary target")


class GateCheck(NamedTuple):
    ok: bool
    distance: float
    phase: complex


def verify_realization(
    name: str,
    kind: str = "y",
    tol: float = 1e-9,
    consts: PhysicalConstants = DEFAULT_CONSTANTS,
) -> GateCheck:
    """Compare a gate's net pulse unitary to its ideal, up to global phase."""
    seq = gate_library(name, kind, consts)
    if any(isinstance(e, Gradient) for e in seq):
        raise ValueError(f"gate {name!r} contains gradients; no net unitary exists")
    net = np.eye(4, dtype=complex)
    for e in seq:
        net = element_unitary(e, consts) @ net
    target = ideal_gate_unitary(name, kind).matrix
    pivot = int(np.argmax(np.abs(target)))
    lam = net.ravel()[pivot] / target.ravel()[pivot]
    if abs(lam) < 1e-9:
        return GateCheck(False, float(np.abs(net - target).max()), 1.0 + 0j)
    lam = lam / abs(lam)
    distance = float(np.abs(net - lam * target).max())
    return GateCheck(distance < tol, distance, complex(lam))


def equilibrium_state(consts: PhysicalConstants = DEFAULT_CONSTANTS) -> DeviationMatrix:
    """Thermal deviation matrix gamma1*Iz1 + gamma2*Iz2 with gamma1 = 1."""
    return DeviationMatrix(IZ1 + consts.gamma_ratio * IZ2)


def target_pseudo_pure() -> np.ndarray:
    """Iz1/2 + Iz2/2 + Iz1*Iz2, identical to |uu><uu| - I/4."""
    return IZ1 / 2 + IZ2 / 2 + IZIZ


def basis_pseudo_pure(label: BasisLabel) -> DeviationMatrix:
    """|label><label| - I/4."""
    proj = np.zeros((4, 4), dtype=complex)
    proj[label.index, label.index] = 1.0
    return DeviationMatrix(proj - np.eye(4) / 4.0)


def prepare_pseudo_pure(consts: PhysicalConstants = DEFAULT_CONSTANTS) -> DeviationMatrix:
    """Run the spatial-averaging prep sequence on the equilibrium state."""
    seq = gate_library("pseudo-pure-prep", consts=consts)
    return simulate_sequence(seq, equilibrium_state(consts), consts)


@dataclass(frozen=True)
class SpectrumLine:
    """One doublet component, labeled by the partner spin's state."""

    spin: int
    line: str
    offset_hz: float
    amplitude: complex


# Single-quantum coherence entries read after the readout pulse:
# (partner-up entry, partner-down entry) per observed spin.
_COHERENCE_INDEX = {1: ((2, 0), (3, 1)), 2: ((1, 0), (3, 2))}


def _raw_line_amplitudes(rho: np.ndarray, spin: int, consts: PhysicalConstants):
    readout = element_unitary(Rf(spin, "y", pi_fraction(1, 2)), consts)
    rotated = readout @ rho @ readout.conj().T
    (up_ij, down_ij) = _COHERENCE_INDEX[spin]
    return rotated[up_ij], rotated[down_ij]


def predict_spectrum(
    rho: DeviationMatrix,
    spin: int,
    consts: PhysicalConstants = DEFAULT_CONSTANTS,
) -> list:
    """Both doublet lines of one spin, calibrated against the uu reference.

    The calibration constant is fixed so the uu pseudo-pure state shows
    +1 on its nonzero (partner-up) line; which signed frequency offset
    carries the partner-up label is a convention, set here to +J/2.
    """
    if spin not in (1, 2):
        raise ValueError(f"spin must be 1 or 2, got {spin!r}")
    ref_up, _ = _raw_line_amplitudes(
        basis_pseudo_pure(BasisLabel.UU).entries, spin, consts
    )
    calibration = 1.0 / ref_up
    up, down = _raw_line_amplitudes(rho.entries, spin, consts)
    half_j = consts.j_hz / 2.0
    return [
        SpectrumLine(spin, "partner_up", +half_j, complex(calibration * up)),
        SpectrumLine(spin, "partner_down", -half_j, complex(calibration * down)),
    ]


@dataclass(frozen=True)
class Fingerprint:
    """Per-spin (nonzero line, sign) pattern; distinct for each basis state."""

    spin1: tuple
    spin2: tuple


def spectrum_fingerprint(
    rho: DeviationMatrix,
    consts: PhysicalConstants = DEFAULT_CONSTANTS,
) -> Fingerprint:
    """Identify which basis pseudo-pure state produced the spectrum."""
    signatures = {}
    for spin in (1, 2):
        lines = predict_spectrum(rho, spin, consts)
        dominant = max(lines, key=lambda line: abs(line.amplitude))
        if abs(dominant.amplitude) < 1e-9:
            raise ValueError(
                f"spin {spin} line amplitudes are all below 1e-9; "
                "not a basis pseudo-pure state"
            )
        sign = 1 if dominant.amplitude.real > 0 else -1
        signatures[spin] = (dominant.line, sign)
    return Fingerprint(signatures[1], signatures[2])


def synthesis_sequence(j: int, kind: str = "y") -> PulseSequence:
    """Pulse program for G (preset j): U, I_t, U^-1, I_s, U, left to right."""
    u = gate_library(f"U{j}", kind)
    u_inv = gate_library(f"U{j}-inv", kind)
    return u + gate_library("I_t", kind) + u_inv + gate_library("I_s", kind) + u


def decoding_sequence(j: int, kind: str = "y") -> PulseSequence:
    """Pulse program for G^-1 (preset j): U^-1, I_s, U, I_t, U^-1."""
    u = gate_library(f"U{j}", kind)
    u_inv = gate_library(f"U{j}-inv", kind)
    return u_inv + gate_library("I_s", kind) + u + gate_library("I_t", kind) + u_inv


def protocol_sequence(
    j: int,
    k: int,
    consts: PhysicalConstants = DEFAULT_CONSTANTS,
) -> PulseSequence:
    """Complete program: prep, G, encoder k (k=1 does nothing), G^-1."""
    if k not in (1, 2, 3, 4):
        raise ValueError(f"encoder index must be 1..4, got {k!r}")
    seq = gate_library("pseudo-pure-prep", consts=consts) + synthesis_sequence(j)
    if k > 1:
        seq = seq + gate_library(f"V{k}")
    return seq + decoding_sequence(j)
