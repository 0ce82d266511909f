"""Linear chains of chirality qubits: gates, couplings, readout.

Register amplitudes live on the product chirality basis with qubit 0 as the
leftmost tensor factor; per qubit, bit 0 means |-1> and bit 1 means |+1>.
RegisterState values are immutable snapshots and every operation returns a
fresh state, so concurrent read-only sharing is safe.

Neighboring qubits couple through switchable weak links modeled as an
isotropic exchange interaction: a pulse of area theta applies
exp(-i*theta*(sigma_i . sigma_j)/4).  theta = pi swaps the pair (up to a
global phase), theta = pi/2 is the entangling half pulse, and two half
pulses interleaved with z-rotations compose a CNOT.  Measurement follows
Born sampling from a caller-seeded generator; the sign of the measured
chirality maps directly onto the sign of the spontaneous Hall voltage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import dynamics
from .dynamics import TwoLevelParams

MAX_QUBITS = 12
UNITARITY_TOL = 1e-10

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = dynamics.SIGMA_X
PAULI_Y = dynamics.SIGMA_Y
PAULI_Z = dynamics.SIGMA_Z

# symmetric-combination gate: |+1> -> (|-1> + |+1>)/sqrt(2)
SYMMETRIC = np.array([[1.0, 1.0], [-1.0, 1.0]], dtype=complex) / math.sqrt(2.0)

SWAP_4 = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)

NAMED_GATES = {
    "I": IDENTITY_2,
    "X": PAULI_X,
    "Y": PAULI_Y,
    "Z": PAULI_Z,
    "H": SYMMETRIC,
}


class NotUnitary(ValueError):
    """Supplied gate matrix is not unitary within tolerance."""


class IndexOutOfRange(IndexError):
    """Qubit index outside the register, or qubits not adjacent."""


class LinkOff(RuntimeError):
    """Two-qubit operation requested across a link that is switched off."""


class InsufficientGradient(ValueError):
    """Bias values too close for the RF field to address a single qubit."""


@dataclass(frozen=True)
class CouplingLink:
    """Switchable weak link between adjacent qubits i and j."""

    i: int
    j: int
    on: bool = True
    strength: float = 1.0

    def __post_init__(self):
        if self.i < 0 or self.j < 0 or abs(self.i - self.j) != 1:
            raise ValueError(f"link must join adjacent qubits, got ({self.i}, {self.j})")
        if not (self.strength > 0.0 and math.isfinite(self.strength)):
            raise ValueError(f"link strength must be > 0, got {self.strength!r}")


@dataclass(frozen=True)
class FieldProfile:
    """Per-qubit bias values produced by the field gradient along the chain."""

    eps: tuple

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps)
        if not all(math.isfinite(e) for e in eps):
            raise ValueError("bias values must be finite")
        object.__setattr__(self, "eps", eps)

    def __len__(self) -> int:
        return len(self.eps)


@dataclass(frozen=True)
class RegisterState:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        if not (1 <= self.n <= MAX_QUBITS):
            raise ValueError(f"register size must be in [1, {MAX_QUBITS}], got {self.n}")
        amps = np.array(self.amps, dtype=complex)
        if amps.shape != (2**self.n,):
            raise ValueError(f"amplitude vector must have length {2**self.n}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"amplitudes not normalized: |amps| = {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def all_minus(cls, n: int) -> "RegisterState":
        amps = np.zeros(2**n, dtype=complex)
        amps[0] = 1.0
        return cls(n, amps)

    @classmethod
    def product(cls, values: Sequence[int]) -> "RegisterState":
        """Basis state from per-qubit chirality values (+1 or -1)."""
        n = len(values)
        index = 0
        for v in values:
            index = (index << 1) | _bit(v)
        amps = np.zeros(2**n, dtype=complex)
        amps[index] = 1.0
        return cls(n, amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def probability_plus(self, q: int) -> float:
        """Reduced probability of reading +1 on qubit q."""
        _check_index(self, q)
        psi = self.amps.reshape([2] * self.n)
        axes = tuple(a for a in range(self.n) if a != q)
        return float(np.sum(np.abs(psi) ** 2, axis=axes)[1])


def _bit(value: int) -> int:
    if value == +1:
        return 1
    if value == -1:
        return 0
    raise ValueError(f"chirality value must be +1 or -1, got {value!r}")


def _check_index(state: RegisterState, q: int) -> None:
    if not (0 <= q < state.n):
        raise IndexOutOfRange(f"qubit {q} outside register of size {state.n}")


def _apply_1q(amps: np.ndarray, n: int, q: int, u: np.ndarray) -> np.ndarray:
    psi = amps.reshape([2] * n)
    psi = np.moveaxis(psi, q, -1)
    psi = psi @ u.T
    return np.moveaxis(psi, -1, q).reshape(-1)


def _apply_2q(amps: np.ndarray, n: int, i: int, j: int, u4: np.ndarray) -> np.ndarray:
    psi = amps.reshape([2] * n)
    psi = np.moveaxis(psi, (i, j), (-2, -1))
    shape = psi.shape
    psi = psi.reshape(-1, 4) @ u4.T
    return np.moveaxis(psi.reshape(shape), (-2, -1), (i, j)).reshape(-1)


def z_rotation(phi: float) -> np.ndarray:
    """exp(-i*phi*sigma_z/2) in the chirality basis."""
    return np.array(
        [[np.exp(0.5j * phi), 0.0], [0.0, np.exp(-0.5j * phi)]], dtype=complex
    )


def apply_single_gate(state: RegisterState, q: int, gate: np.ndarray) -> RegisterState:
    """Apply a 2x2 unitary on qubit q's tensor factor."""
    _check_index(state, q)
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        raise NotUnitary(f"gate must be 2x2, got shape {gate.shape}")
    if np.abs(gate.conj().T @ gate - IDENTITY_2).max() > UNITARITY_TOL:
        raise NotUnitary("gate is not unitary within 1e-10")
    return RegisterState(state.n, _apply_1q(state.amps, state.n, q, gate))


def exchange_unitary(pulse_area: float) -> np.ndarray:
    """4x4 exchange pulse exp(-i*theta*(sigma.sigma)/4).

    sigma.sigma = 2*SWAP - I, so the pulse is
    e^{i theta/4} (cos(theta/2) I - i sin(theta/2) SWAP).
    """
    theta = float(pulse_area)
    return np.exp(0.25j * theta) * (
        math.cos(0.5 * theta) * np.eye(4, dtype=complex)
        - 1j * math.sin(0.5 * theta) * SWAP_4
    )


def exchange_pulse(state: RegisterState, link: CouplingLink, pulse_area: float) -> RegisterState:
    """Exchange pulse of area theta across an on link; theta = pi is SWAP."""
    if not link.on:
        raise LinkOff(f"link ({link.i}, {link.j}) is off")
    if not (pulse_area >= 0.0 and math.isfinite(pulse_area)):
        raise ValueError(f"pulse_area must be finite and >= 0, got {pulse_area!r}")
    _check_index(state, link.i)
    _check_index(state, link.j)
    amps = _apply_2q(state.amps, state.n, link.i, link.j, exchange_unitary(pulse_area))
    return RegisterState(state.n, amps)


def cnot_composed(
    state: RegisterState, control: int, target: int, link: CouplingLink
) -> RegisterState:
    """CNOT from two half exchange pulses and single-qubit rotations.

    The z-rotation/half-pulse core produces a conditional phase flip; basis
    changes on the target turn it into the bit flip.  Control is active on
    |+1>.  The net unitary equals canonical CNOT up to a global phase.
    """
    _check_index(state, control)
    _check_index(state, target)
    if abs(control - target) != 1:
        raise IndexOutOfRange(f"control {control} and target {target} must be adjacent")
    if {link.i, link.j} != {control, target}:
        raise ValueError(f"link ({link.i}, {link.j}) does not join {control} and {target}")
    if not link.on:
        raise LinkOff(f"link ({link.i}, {link.j}) is off")

    s = apply_single_gate(state, target, SYMMETRIC)
    s = exchange_pulse(s, link, math.pi / 2.0)
    s = apply_single_gate(s, control, z_rotation(-math.pi))
    s = exchange_pulse(s, link, math.pi / 2.0)
    s = apply_single_gate(s, control, z_rotation(-math.pi / 2.0))
    s = apply_single_gate(s, target, z_rotation(+math.pi / 2.0))
    return apply_single_gate(s, target, SYMMETRIC.conj().T)


def selective_rf_pulse(
    state: RegisterState,
    profile: FieldProfile,
    target: int,
    amp: float,
    duration: float,
    dt: float,
) -> RegisterState:
    """Global RF pulse tuned to the target qubit's splitting 2*eps[target].

    Every qubit sees the same drive; the field gradient makes only the target
    resonant.  Tunneling is neglected during addressing (bias-dominated
    regime), so each lab-frame qubit evolves under
    eps_q*sigma_z + amp*cos(w t)*sigma_x.  The returned state is expressed in
    the rotating frame of each qubit's static bias (the frame the pulse is
    calibrated in), so amp = 0 is exactly the identity and spectators pick up
    population error bounded by amp^2/(amp^2 + detuning^2) and nothing else.
    """
    _check_index(state, target)
    if len(profile) != state.n:
        raise ValueError(f"profile has {len(profile)} biases for {state.n} qubits")
    if not (amp >= 0.0 and math.isfinite(amp)):
        raise ValueError(f"amp must be finite and >= 0, got {amp!r}")
    if amp == 0.0:
        return state
    eps = profile.eps
    gap = min(
        abs(eps[a] - eps[b]) for a in range(len(eps)) for b in range(a + 1, len(eps))
    ) if len(eps) > 1 else math.inf
    if gap < 5.0 * amp:
        raise InsufficientGradient(
            f"minimum bias separation {gap:g} is below 5*amp = {5.0 * amp:g}"
        )
    omega = 2.0 * abs(profile.eps[target])
    amps = state.amps
    for q in range(state.n):
        params = TwoLevelParams(epsilon=profile.eps[q], drive_amp=amp, drive_freq=omega)
        u = dynamics.drive_propagator(params, duration, dt)
        unwind = dynamics._propagator(0.0, 0.0, -profile.eps[q], duration)
        amps = _apply_1q(amps, state.n, q, unwind @ u)
    return RegisterState(state.n, amps)


def initialize_reset(state: RegisterState, q: int, value: int) -> RegisterState:
    """Reset qubit q to the requested chirality basis state.

    Projects and renormalizes; when the projection has (numerically) zero
    weight the opposite component is moved into the requested slot instead,
    so the reset always succeeds deterministically.
    """
    _check_index(state, q)
    bit = _bit(value)
    psi = state.amps.reshape([2] * state.n)
    keep = np.take(psi, bit, axis=q)
    weight = float(np.sum(np.abs(keep) ** 2))
    if weight <= 1e-24:
        keep = np.take(psi, 1 - bit, axis=q)
        weight = float(np.sum(np.abs(keep) ** 2))
    keep = keep / math.sqrt(weight)
    zero = np.zeros_like(keep)
    parts = (keep, zero) if bit == 0 else (zero, keep)
    return RegisterState(state.n, np.stack(parts, axis=q).reshape(-1))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def measure(state: RegisterState, q: int, seed) -> tuple[int, RegisterState]:
    """Born-rule measurement of qubit q's chirality.

    seed is an integer or a numpy Generator; passing the same Generator
    through a chain of calls makes the whole outcome sequence reproducible.
    Returns (outcome, collapsed state) with outcome +1 or -1.
    """
    _check_index(state, q)
    rng = _as_rng(seed)
    p_plus = state.probability_plus(q)
    outcome = +1 if rng.random() < p_plus else -1
    bit = _bit(outcome)
    psi = state.amps.reshape([2] * state.n)
    keep = np.take(psi, bit, axis=q)
    keep = keep / math.sqrt(float(np.sum(np.abs(keep) ** 2)))
    zero = np.zeros_like(keep)
    parts = (keep, zero) if bit == 0 else (zero, keep)
    return outcome, RegisterState(state.n, np.stack(parts, axis=q).reshape(-1))


def hall_voltage(outcome: int, v0: float) -> float:
    """Signed Hall readout voltage for a measured chirality.

    The spontaneous Hall voltage is proportional to the chirality number, so
    its sign is the readout observable: returns outcome * v0.
    """
    if outcome not in (+1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")
    if not (v0 > 0.0 and math.isfinite(v0)):
        raise ValueError(f"v0 must be finite and > 0, got {v0!r}")
    return float(outcome) * float(v0)
