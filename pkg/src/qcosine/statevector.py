"""Dense complex state-vector simulation.

Convention: little-endian, qubit 0 is the least-significant bit of the
basis-state integer label. Amplitudes are complex128; every public
operation checks that the 2-norm stays at 1 within NORM_ATOL and raises
instead of silently renormalizing, so a gate bug cannot hide.
"""

from __future__ import annotations

import math

import numpy as np

from .circuits import Circuit, Gate, GateKind
from .errors import InvalidCircuitError, StateNormError

# Soft cap: 2**26 complex128 amplitudes is 1 GiB.
MAX_QUBITS = 26
NORM_ATOL = 1e-10

_H_MATRIX = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)
_X_MATRIX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def _ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


class StateVector:
    """Normalized pure state of ``num_qubits`` qubits."""

    def __init__(self, num_qubits: int, amplitudes: np.ndarray, *,
                 max_qubits: int = MAX_QUBITS):
        if num_qubits < 1:
            raise InvalidCircuitError("need at least one qubit")
        if num_qubits > max_qubits:
            raise InvalidCircuitError(
                f"{num_qubits} qubits exceeds the cap of {max_qubits}"
            )
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (1 << num_qubits,):
            raise InvalidCircuitError(
                f"expected {1 << num_qubits} amplitudes, got {amplitudes.shape}"
            )
        self.num_qubits = num_qubits
        self.amplitudes = amplitudes
        self._check_norm()

    def _check_norm(self):
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > NORM_ATOL:
            raise StateNormError(f"state norm drifted to {norm!r}")

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        amps = np.zeros(1 << num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        amplitudes = np.asarray(amplitudes, dtype=complex)
        num_qubits = int(amplitudes.size).bit_length() - 1
        return cls(num_qubits, amplitudes)

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def extended(self, extra_qubits: int) -> "StateVector":
        """Append ``extra_qubits`` fresh qubits in |0> above the current ones."""
        amps = np.zeros(1 << (self.num_qubits + extra_qubits), dtype=complex)
        amps[: self.amplitudes.size] = self.amplitudes
        return StateVector(self.num_qubits + extra_qubits, amps)

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits})"


def random_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    """Haar-ish random pure state (Gaussian amplitudes, normalized)."""
    amps = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    return StateVector(num_qubits, amps / np.linalg.norm(amps))


def _check_gate_fits(gate: Gate, num_qubits: int):
    if any(q >= num_qubits for q in gate.qubits):
        raise InvalidCircuitError(
            f"gate {gate.kind.name} on qubits {gate.qubits} does not fit "
            f"a {num_qubits}-qubit state"
        )


def _apply_single(amps: np.ndarray, target: int, u: np.ndarray,
                  controls: tuple[int, ...]):
    idx = np.arange(amps.size)
    sel = (idx >> target) & 1 == 0
    for c in controls:
        sel &= (idx >> c) & 1 == 1
    i0 = idx[sel]
    i1 = i0 | (1 << target)
    a0, a1 = amps[i0], amps[i1]
    amps[i0] = u[0, 0] * a0 + u[0, 1] * a1
    amps[i1] = u[1, 0] * a0 + u[1, 1] * a1


def _apply_swap(amps: np.ndarray, target_a: int, target_b: int,
                controls: tuple[int, ...]):
    idx = np.arange(amps.size)
    sel = ((idx >> target_a) & 1 == 1) & ((idx >> target_b) & 1 == 0)
    for c in controls:
        sel &= (idx >> c) & 1 == 1
    i0 = idx[sel]
    i1 = i0 ^ ((1 << target_a) | (1 << target_b))
    amps[i0], amps[i1] = amps[i1], amps[i0].copy()


def _apply_gate_inplace(amps: np.ndarray, gate: Gate):
    if gate.kind is GateKind.H:
        _apply_single(amps, gate.targets[0], _H_MATRIX, gate.controls)
    elif gate.kind in (GateKind.X, GateKind.CNOT):
        _apply_single(amps, gate.targets[0], _X_MATRIX, gate.controls)
    elif gate.kind is GateKind.RY:
        _apply_single(amps, gate.targets[0], _ry_matrix(gate.angle), gate.controls)
    elif gate.kind is GateKind.FREDKIN:
        _apply_swap(amps, gate.targets[0], gate.targets[1], gate.controls)
    else:  # pragma: no cover - enum is closed
        raise InvalidCircuitError(f"unknown gate kind {gate.kind}")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Return the state transformed by one gate (norm checked afterwards)."""
    _check_gate_fits(gate, state.num_qubits)
    amps = state.amplitudes.copy()
    _apply_gate_inplace(amps, gate)
    return StateVector(state.num_qubits, amps)


def run_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    """Apply all gates of ``circuit`` in order."""
    if circuit.num_qubits > state.num_qubits:
        raise InvalidCircuitError(
            f"circuit needs {circuit.num_qubits} qubits, state has "
            f"{state.num_qubits}"
        )
    amps = state.amplitudes.copy()
    for gate in circuit.gates:
        _apply_gate_inplace(amps, gate)
    return StateVector(state.num_qubits, amps)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.num_qubits != b.num_qubits:
        raise InvalidCircuitError(
            f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def probability_of(state: StateVector, qubit: int, outcome: int) -> float:
    """Probability that measuring ``qubit`` yields ``outcome``."""
    if not 0 <= qubit < state.num_qubits:
        raise InvalidCircuitError(f"qubit {qubit} out of range")
    if outcome not in (0, 1):
        raise InvalidCircuitError(f"outcome must be 0 or 1, got {outcome}")
    bits = (np.arange(state.amplitudes.size) >> qubit) & 1
    p = float(np.sum(np.abs(state.amplitudes[bits == outcome]) ** 2))
    return min(max(p, 0.0), 1.0)


def measure_qubit(state: StateVector, qubit: int,
                  rng: np.random.Generator) -> tuple[int, StateVector]:
    """Projective measurement of one qubit.

    Draws the outcome from the Born distribution (one uniform variate
    from ``rng``, so identical seeds give identical outcome sequences)
    and returns the renormalized post-measurement state.
    """
    p1 = probability_of(state, qubit, 1)
    outcome = int(rng.random() < p1)
    bits = (np.arange(state.amplitudes.size) >> qubit) & 1
    amps = state.amplitudes.copy()
    amps[bits != outcome] = 0.0
    p = p1 if outcome == 1 else 1.0 - p1
    amps /= math.sqrt(p)
    return outcome, StateVector(state.num_qubits, amps)
