import math

import numpy as np
import pytest

from qcosine.circuits import (
    Circuit,
    GateKind,
    build_example_circuits,
    build_swap_test,
    decompose,
    export_qasm,
    fredkin,
    h,
    ry,
    toffoli,
)
from qcosine.errors import InvalidCircuitError, UnsupportedGateError
from qcosine.statevector import (
    StateVector,
    inner_product,
    probability_of,
    random_state,
    run_circuit,
)

SQRT1_2 = 1.0 / math.sqrt(2.0)


def test_swap_test_width_one_gate_count():
    circuit = build_swap_test(0, (1,), (2,))
    kinds = [g.kind for g in circuit.gates]
    assert kinds == [GateKind.H, GateKind.FREDKIN, GateKind.H]


def test_swap_test_width_three_gate_count():
    circuit = build_swap_test(0, (1, 2, 3), (4, 5, 6))
    kinds = [g.kind for g in circuit.gates]
    assert kinds == [GateKind.H] + [GateKind.FREDKIN] * 3 + [GateKind.H]
    assert all(g.controls == (0,) for g in circuit.gates
               if g.kind is GateKind.FREDKIN)


def test_swap_test_width_mismatch():
    with pytest.raises(InvalidCircuitError):
        build_swap_test(0, (1,), (2, 3))


def _product_input(phi, psi):
    """|0>_c (x) |phi>_b (x) |psi>_a with c = qubit 0, psi on low qubits."""
    w = phi.num_qubits
    amps = np.zeros(1 << (2 * w + 1), dtype=complex)
    amps[0::2] = np.kron(phi.amplitudes, psi.amplitudes)
    return StateVector(2 * w + 1, amps)


@pytest.mark.parametrize("width", [1, 2])
def test_swap_test_identity_on_random_pairs(width):
    rng = np.random.default_rng(2024)
    test = build_swap_test(0, tuple(range(1, width + 1)),
                           tuple(range(width + 1, 2 * width + 1)))
    for _ in range(50):
        phi, psi = random_state(width, rng), random_state(width, rng)
        state = run_circuit(_product_input(phi, psi), test)
        p1 = probability_of(state, 0, 1)
        expected = 0.5 * (1.0 - abs(inner_product(phi, psi)) ** 2)
        assert abs(p1 - expected) < 1e-10


def test_training_prep_matches_expected_superposition():
    prep_train, _, _ = build_example_circuits()
    state = run_circuit(StateVector.zero(3), prep_train)
    # (|0,0,0> + |1,x1,1>)/sqrt(2); index bit 0, data bit 1, label bit 2
    expected = np.zeros(8)
    expected[0b000] = SQRT1_2
    expected[0b101] = 0.718 * SQRT1_2
    expected[0b111] = 0.696 * SQRT1_2
    assert np.allclose(state.amplitudes.real, expected, atol=1e-3)
    assert np.allclose(state.amplitudes.imag, 0.0)


def test_query_prep_is_product_state():
    _, prep_query, _ = build_example_circuits()
    state = run_circuit(StateVector.zero(3), prep_query)
    data = np.array([0.884, 0.468])
    minus = np.array([SQRT1_2, -SQRT1_2])
    plus = np.array([SQRT1_2, SQRT1_2])
    # little-endian: index bit 0, data bit 1, label bit 2
    expected = np.kron(minus, np.kron(data, plus))
    assert np.allclose(state.amplitudes.real, expected, atol=1e-3)


def test_full_circuit_control_probability():
    _, _, full = build_example_circuits()
    state = run_circuit(StateVector.zero(7), full)
    assert abs(probability_of(state, 0, 1) - 0.2568) < 1e-3


def test_circuit_validation_rejects_out_of_range_gate():
    with pytest.raises(InvalidCircuitError):
        Circuit(2, (h(2),))


def test_circuit_validation_rejects_overlapping_roles():
    with pytest.raises(InvalidCircuitError):
        Circuit(2, (h(0),), {"a": (0,), "b": (0, 1)})


# ---------------------------------------------------------------------------
# OpenQASM export
# ---------------------------------------------------------------------------

def test_qasm_single_h():
    text = export_qasm(Circuit(1, (h(0),)))
    assert "h q[0];" in text
    assert text.startswith("OPENQASM 2.0;")


def test_qasm_ry_angle_passthrough():
    text = export_qasm(Circuit(1, (ry(0.31 * math.pi, 0),)))
    assert "ry(0.9738937226128359) q[0];" in text


def test_qasm_unsupported_gate_names_offender():
    circuit = Circuit(4, (ry(0.5, 0, controls=(1, 2, 3)),))
    with pytest.raises(UnsupportedGateError, match="RY"):
        export_qasm(circuit)


def test_qasm_fredkin_native_and_decomposed():
    circuit = Circuit(3, (fredkin(0, 1, 2),))
    assert "cswap q[0],q[1],q[2];" in export_qasm(circuit)
    lowered = export_qasm(circuit, native_cswap=False)
    assert "cswap" not in lowered
    assert "ccx" in lowered


@pytest.mark.parametrize("b_state", ["+", "-"])
@pytest.mark.parametrize("native_cswap", [True, False])
def test_decomposition_preserves_action_on_random_states(b_state, native_cswap):
    rng = np.random.default_rng(17)
    for circuit in build_example_circuits(b_state):
        lowered = decompose(circuit, native_cswap=native_cswap)
        for _ in range(20):
            state = random_state(circuit.num_qubits, rng)
            direct = run_circuit(state, circuit).amplitudes
            via = run_circuit(state, lowered).amplitudes
            assert np.linalg.norm(direct - via) < 1e-9


def test_double_controlled_ry_decomposition():
    rng = np.random.default_rng(3)
    gate = ry(1.1, 2, controls=(0, 1))
    circuit = Circuit(3, (gate,))
    lowered = decompose(circuit)
    assert all(len(g.controls) <= 1 for g in lowered.gates)
    for _ in range(20):
        state = random_state(3, rng)
        assert np.linalg.norm(run_circuit(state, circuit).amplitudes
                              - run_circuit(state, lowered).amplitudes) < 1e-9


def test_toffoli_helper_builds_double_controlled_x():
    gate = toffoli(0, 1, 2)
    assert gate.kind is GateKind.X and set(gate.controls) == {0, 1}
