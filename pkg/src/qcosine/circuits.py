"""Gate-level circuit IR, circuit builders, and OpenQASM 2.0 export.

Gates act on little-endian qubit indices (qubit 0 is the least
significant bit of a basis-state integer). Circuits are immutable after
construction and validated eagerly, so an invalid circuit is never
representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import InvalidCircuitError, UnsupportedGateError

# Rotation angles of the bundled two-point instance (N=2, d=2):
# RY(TRAIN_ANGLE)|0> encodes the second training vector, and
# RY(QUERY_ANGLE)|0> encodes the query vector.
TRAIN_ANGLE = 0.49 * math.pi
QUERY_ANGLE = 0.31 * math.pi


class GateKind(Enum):
    H = "h"
    X = "x"
    RY = "ry"
    CNOT = "cnot"
    FREDKIN = "fredkin"


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "controls", tuple(self.controls))
        n_targets = {
            GateKind.H: 1,
            GateKind.X: 1,
            GateKind.RY: 1,
            GateKind.CNOT: 1,
            GateKind.FREDKIN: 2,
        }[self.kind]
        if len(self.targets) != n_targets:
            raise InvalidCircuitError(
                f"{self.kind.name} expects {n_targets} target(s), "
                f"got {self.targets}"
            )
        if self.kind is GateKind.RY:
            if self.angle is None:
                raise InvalidCircuitError("RY requires an angle")
        elif self.angle is not None:
            raise InvalidCircuitError(f"{self.kind.name} takes no angle")
        if self.kind is GateKind.CNOT and not self.controls:
            raise InvalidCircuitError("CNOT requires at least one control")
        qubits = self.targets + self.controls
        if len(set(qubits)) != len(qubits):
            raise InvalidCircuitError(f"duplicate qubit in gate: {qubits}")
        if any(q < 0 for q in qubits):
            raise InvalidCircuitError(f"negative qubit index in gate: {qubits}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + self.controls


def h(target: int, controls: Iterable[int] = ()) -> Gate:
    return Gate(GateKind.H, (target,), tuple(controls))


def x(target: int, controls: Iterable[int] = ()) -> Gate:
    return Gate(GateKind.X, (target,), tuple(controls))


def ry(angle: float, target: int, controls: Iterable[int] = ()) -> Gate:
    return Gate(GateKind.RY, (target,), tuple(controls), angle)


def cnot(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, (target,), (control,))


def toffoli(control_a: int, control_b: int, target: int) -> Gate:
    return Gate(GateKind.X, (target,), (control_a, control_b))


def fredkin(control: int, target_a: int, target_b: int) -> Gate:
    return Gate(GateKind.FREDKIN, (target_a, target_b), (control,))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...]
    qubit_roles: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "qubit_roles",
                           {k: tuple(v) for k, v in self.qubit_roles.items()})
        if self.num_qubits < 1:
            raise InvalidCircuitError("circuit needs at least one qubit")
        for gate in self.gates:
            if any(q >= self.num_qubits for q in gate.qubits):
                raise InvalidCircuitError(
                    f"gate {gate.kind.name} on {gate.qubits} exceeds "
                    f"{self.num_qubits} qubits"
                )
        seen: set[int] = set()
        for role, qubits in self.qubit_roles.items():
            overlap = seen.intersection(qubits)
            if overlap:
                raise InvalidCircuitError(
                    f"role '{role}' overlaps other roles on qubits {overlap}"
                )
            if any(q >= self.num_qubits for q in qubits):
                raise InvalidCircuitError(f"role '{role}' exceeds qubit count")
            seen.update(qubits)


def build_swap_test(control_c: int,
                    reg_b: Sequence[int],
                    reg_a: Sequence[int],
                    num_qubits: int | None = None) -> Circuit:
    """SWAP test between two equal-width registers.

    Emits H on the control, one Fredkin per register pair, then H on the
    control. After running it on |0>_c |phi> |psi>, the control measures
    1 with probability (1 - |<phi|psi>|^2) / 2.
    """
    reg_a = tuple(reg_a)
    reg_b = tuple(reg_b)
    if len(reg_a) != len(reg_b) or not reg_a:
        raise InvalidCircuitError(
            f"register widths differ: {len(reg_b)} vs {len(reg_a)}"
        )
    gates = [h(control_c)]
    gates += [fredkin(control_c, qb, qa) for qb, qa in zip(reg_b, reg_a)]
    gates.append(h(control_c))
    if num_qubits is None:
        num_qubits = max((control_c,) + reg_a + reg_b) + 1
    roles = {"control-c": (control_c,), "reg-b": reg_b, "reg-a": reg_a}
    return Circuit(num_qubits, tuple(gates), roles)


def build_example_circuits(b_state: str = "+") -> tuple[Circuit, Circuit, Circuit]:
    """Explicit circuits for the bundled two-point instance.

    Returns (prep_train, prep_query, full):

    * prep_train: 3 qubits (index, data, label), prepares the training
      superposition (|0,0,0> + |1,x1,1>) / sqrt(2).
    * prep_query: 3 qubits, prepares |+> |x> |->.
    * full: the 7-qubit composite. Layout: q0 = SWAP-test control c,
      q1 = ancilla b, q2 = ancilla a, q3 = index register, q4 = work
      ancilla for the doubly-controlled rotation, q5 = data register,
      q6 = label qubit. `b_state` selects the preparation of qubit b
      ("+" is the default; "-" reproduces the alternative convention,
      which flips the decision inequality).
    """
    if b_state not in ("+", "-"):
        raise InvalidCircuitError(f"b_state must be '+' or '-', got {b_state!r}")

    roles3 = {"index-register": (0,), "data-register": (1,), "label": (2,)}
    prep_train = Circuit(3, (
        h(0),
        ry(TRAIN_ANGLE, 1, controls=(0,)),
        cnot(0, 2),
    ), roles3)
    prep_query = Circuit(3, (
        h(0),
        ry(QUERY_ANGLE, 1),
        x(2),
        h(2),
    ), roles3)

    gates: list[Gate] = [
        h(2),            # ancilla a superposition
        h(3),            # index register (common to both branches)
        # branch a=0: training superposition, controls conjugated by X
        x(2),
        toffoli(2, 3, 4),
        ry(TRAIN_ANGLE, 5, controls=(4,)),
        cnot(4, 6),
        toffoli(2, 3, 4),  # uncompute the work ancilla
        x(2),
        # branch a=1: query state with label qubit in |->
        ry(QUERY_ANGLE, 5, controls=(2,)),
        cnot(2, 6),
        h(6, controls=(2,)),
    ]
    if b_state == "-":
        gates.append(x(1))
    gates.append(h(1))
    gates += [h(0), fredkin(0, 1, 2), h(0)]

    roles7 = {
        "control-c": (0,),
        "ancilla-b": (1,),
        "ancilla-a": (2,),
        "index-register": (3,),
        "work-ancilla": (4,),
        "data-register": (5,),
        "label": (6,),
    }
    full = Circuit(7, tuple(gates), roles7)
    return prep_train, prep_query, full


# ---------------------------------------------------------------------------
# OpenQASM 2.0 export
# ---------------------------------------------------------------------------

def _decompose_controlled_ry(gate: Gate) -> list[Gate]:
    theta = gate.angle
    (t,) = gate.targets
    if len(gate.controls) == 1:
        (c,) = gate.controls
        half = theta / 2.0
        return [ry(half, t), cnot(c, t), ry(-half, t), cnot(c, t)]
    if len(gate.controls) == 2:
        ca, cb = gate.controls
        out: list[Gate] = []
        out += _decompose_controlled_ry(ry(theta / 2.0, t, controls=(cb,)))
        out.append(cnot(ca, cb))
        out += _decompose_controlled_ry(ry(-theta / 2.0, t, controls=(cb,)))
        out.append(cnot(ca, cb))
        out += _decompose_controlled_ry(ry(theta / 2.0, t, controls=(ca,)))
        return out
    raise UnsupportedGateError(f"RY with {len(gate.controls)} controls: {gate}")


def decompose(circuit: Circuit, *, native_cswap: bool = True) -> Circuit:
    """Rewrite a circuit into the gate set the QASM emitter handles natively.

    Controlled-RY becomes RY(t/2) . CNOT . RY(-t/2) . CNOT (recursively
    for two controls); with ``native_cswap=False`` each Fredkin becomes
    the standard CNOT / Toffoli / CNOT sandwich.
    """
    out: list[Gate] = []
    for gate in circuit.gates:
        nc = len(gate.controls)
        if gate.kind is GateKind.RY and nc > 0:
            out += _decompose_controlled_ry(gate)
        elif gate.kind is GateKind.FREDKIN:
            if nc != 1:
                raise UnsupportedGateError(
                    f"Fredkin must have exactly one control, got {gate}"
                )
            if native_cswap:
                out.append(gate)
            else:
                c = gate.controls[0]
                ta, tb = gate.targets
                out += [cnot(tb, ta), toffoli(c, ta, tb), cnot(tb, ta)]
        elif gate.kind is GateKind.H and nc > 1:
            raise UnsupportedGateError(f"H with {nc} controls: {gate}")
        elif gate.kind in (GateKind.X, GateKind.CNOT) and nc > 2:
            raise UnsupportedGateError(f"X with {nc} controls: {gate}")
        else:
            out.append(gate)
    return Circuit(circuit.num_qubits, tuple(out), circuit.qubit_roles)


def _emit(gate: Gate) -> str:
    nc = len(gate.controls)
    if gate.kind is GateKind.H:
        if nc == 0:
            return f"h q[{gate.targets[0]}];"
        if nc == 1:
            return f"ch q[{gate.controls[0]}],q[{gate.targets[0]}];"
    elif gate.kind in (GateKind.X, GateKind.CNOT):
        t = gate.targets[0]
        if nc == 0:
            return f"x q[{t}];"
        if nc == 1:
            return f"cx q[{gate.controls[0]}],q[{t}];"
        if nc == 2:
            ca, cb = gate.controls
            return f"ccx q[{ca}],q[{cb}],q[{t}];"
    elif gate.kind is GateKind.RY and nc == 0:
        return f"ry({gate.angle!r}) q[{gate.targets[0]}];"
    elif gate.kind is GateKind.FREDKIN and nc == 1:
        ta, tb = gate.targets
        return f"cswap q[{gate.controls[0]}],q[{ta}],q[{tb}];"
    raise UnsupportedGateError(f"cannot emit {gate}")


def export_qasm(circuit: Circuit, *, native_cswap: bool = True) -> str:
    """Render a circuit as an OpenQASM 2.0 program."""
    lowered = decompose(circuit, native_cswap=native_cswap)
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{lowered.num_qubits}];",
    ]
    lines += [_emit(gate) for gate in lowered.gates]
    return "\n".join(lines) + "\n"
