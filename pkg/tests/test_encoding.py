import math

import numpy as np
import pytest

from qcosine.encoding import (
    DataVector,
    EncodingLayout,
    TrainingSet,
    amplitude_encode,
    build_joint_state,
    build_knn_state,
    build_query_state,
    build_training_state,
)
from qcosine.errors import DataError
from qcosine.oracle import cosine_similarity
from qcosine.statevector import inner_product, probability_of, run_circuit
from qcosine.circuits import build_swap_test

SQRT1_2 = 1.0 / math.sqrt(2.0)


def test_zero_vector_rejected():
    with pytest.raises(DataError):
        DataVector([0.0, 0.0])


def test_norm_cached():
    v = DataVector([3.0, 4.0])
    assert abs(v.norm - 5.0) < 1e-12


def test_training_set_validation():
    with pytest.raises(DataError):
        TrainingSet([])
    with pytest.raises(DataError):
        TrainingSet([([1.0, 0.0], 0)])
    with pytest.raises(DataError):
        TrainingSet([([1.0, 0.0], 1), ([1.0, 0.0, 0.0], -1)])


def test_label_bits():
    ts = TrainingSet([([1.0], 1), ([2.0], -1)])
    assert list(ts.label_bits) == [0, 1]


def test_amplitude_encode_basis_vector():
    state = amplitude_encode(DataVector([1.0, 0.0]))
    assert np.allclose(state.amplitudes, [1.0, 0.0])


def test_amplitude_encode_example_vector():
    state = amplitude_encode(DataVector([0.718, 0.696]))
    assert abs(state.amplitudes[0] - 0.718) < 1e-3
    assert abs(state.amplitudes[1] - 0.696) < 1e-3


def test_amplitude_encode_uniform():
    state = amplitude_encode(DataVector([1.0, 1.0, 1.0, 1.0]))
    assert np.allclose(state.amplitudes, 0.5)


def test_amplitude_encode_pads_non_power_of_two():
    state = amplitude_encode(DataVector([1.0, 1.0, 1.0]))
    assert state.num_qubits == 2
    assert state.amplitudes[3] == 0.0


def test_encoding_cosine_correspondence_many_pairs():
    rng = np.random.default_rng(99)
    for _ in range(1000):
        d = int(rng.choice([2, 3, 5, 8]))
        a, b = rng.normal(size=d), rng.normal(size=d)
        q = inner_product(amplitude_encode(DataVector(a)),
                          amplitude_encode(DataVector(b))).real
        assert abs(q - cosine_similarity(a, b)) < 1e-12


def test_training_state_two_point_example():
    ts = TrainingSet([([1.0, 0.0], 1), ([0.718, 0.696], -1)])
    state = build_training_state(ts)
    layout = EncodingLayout.for_training_set(ts)
    # label bit 0, data bit 1, index bit 2
    assert layout.num_state_qubits == 3
    expected = np.zeros(8)
    expected[0b000] = SQRT1_2
    expected[0b101] = 0.718 * SQRT1_2
    expected[0b111] = 0.696 * SQRT1_2
    assert np.allclose(state.amplitudes.real, expected, atol=1e-3)


def test_training_state_single_positive_point():
    ts = TrainingSet([([1.0, 0.0], 1)])
    state = build_training_state(ts)
    expected = np.zeros(4)
    expected[0] = 1.0
    assert np.allclose(state.amplitudes, expected)


def test_all_positive_labels_leave_label_qubit_pure():
    rng = np.random.default_rng(5)
    ts = TrainingSet([(rng.normal(size=4), 1) for _ in range(4)])
    state = build_training_state(ts)
    # label qubit 0 must factor out as |0>
    assert probability_of(state, 0, 0) == pytest.approx(1.0, abs=1e-10)


def test_query_state_plus_x_minus():
    ts = TrainingSet([([1.0, 0.0], 1), ([0.0, 1.0], -1)])
    layout = EncodingLayout.for_training_set(ts)
    state = build_query_state(DataVector([1.0, 0.0]), layout)
    plus = np.array([SQRT1_2, SQRT1_2])
    minus = np.array([SQRT1_2, -SQRT1_2])
    data = np.array([1.0, 0.0])
    expected = np.kron(plus, np.kron(data, minus))  # index high, label low
    assert np.allclose(state.amplitudes.real, expected, atol=1e-12)


def test_training_query_overlap_closed_form():
    rng = np.random.default_rng(123)
    for _ in range(100):
        n = int(rng.choice([1, 2, 3, 4, 5]))
        d = int(rng.choice([2, 3, 4]))
        vecs = rng.normal(size=(n, d))
        labels = rng.choice([-1, 1], size=n)
        ts = TrainingSet(list(zip(vecs, labels)))
        x = DataVector(rng.normal(size=d))
        layout = EncodingLayout.for_training_set(ts)
        overlap = inner_product(build_training_state(ts, layout),
                                build_query_state(x, layout)).real
        expected = sum(y * cosine_similarity(v, x)
                       for v, y in ts.points) / (n * math.sqrt(2.0))
        assert abs(overlap - expected) < 1e-10


def test_joint_state_unit_norm_and_single_point_form():
    ts = TrainingSet([([1.0, 0.0], 1)])
    x = DataVector([1.0, 0.0])
    state = build_joint_state(ts, x)
    assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-10
    # branches: |0>|0>_l |0>_a / sqrt2  and  |x>(|0>-|1>)_l |1>_a / 2
    nonzero = np.flatnonzero(np.abs(state.amplitudes) > 1e-12)
    assert len(nonzero) == 3


def test_knn_state_single_point():
    ts = TrainingSet([([0.0, 1.0], 1)])
    state = build_knn_state(ts, DataVector([1.0, 0.0]))
    # ancilla bit0=0, query bit1 -> |0>, train bit2 -> |1>
    expected = np.zeros(8)
    expected[0b100] = 1.0
    assert np.allclose(state.amplitudes.real, expected)


def test_knn_state_negative_entries_warn():
    ts = TrainingSet([([1.0, -1.0], 1)])
    with pytest.warns(UserWarning, match="negative entries"):
        build_knn_state(ts, DataVector([1.0, 1.0]))


def test_identical_points_give_zero_swap_test_probability():
    x = DataVector([0.6, 0.8])
    ts = TrainingSet([(x.components, 1), (x.components, -1)])
    layout = EncodingLayout.for_training_set(ts)
    state = build_knn_state(ts, x, layout)
    test = build_swap_test(layout.knn_ancilla, layout.knn_train_register,
                           layout.knn_query_register,
                           num_qubits=layout.num_knn_qubits)
    state = run_circuit(state, test)
    assert probability_of(state, layout.knn_ancilla, 1) < 1e-12


def test_non_power_of_two_point_count():
    rng = np.random.default_rng(8)
    ts = TrainingSet([(rng.normal(size=2), 1) for _ in range(3)])
    layout = EncodingLayout.for_training_set(ts)
    assert layout.index_qubits == 2
    state = build_training_state(ts, layout)
    assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-10
    # padding branch i=3 carries no amplitude
    padded = state.amplitudes[3 << (layout.n + 1):]
    assert np.all(padded == 0.0)


def test_query_dimension_mismatch():
    ts = TrainingSet([([1.0, 0.0], 1)])
    layout = EncodingLayout.for_training_set(ts)
    with pytest.raises(DataError):
        build_query_state(DataVector([1.0, 0.0, 0.0]), layout)


def test_all_builders_unit_norm_random_instances():
    rng = np.random.default_rng(31)
    for _ in range(25):
        n = int(rng.choice([1, 2, 3, 5]))
        d = int(rng.choice([2, 3, 4]))
        ts = TrainingSet([(np.abs(rng.normal(size=d)) + 0.01,
                           int(rng.choice([-1, 1]))) for _ in range(n)])
        x = DataVector(np.abs(rng.normal(size=d)) + 0.01)
        layout = EncodingLayout.for_training_set(ts)
        for state in (build_training_state(ts, layout),
                      build_query_state(x, layout),
                      build_joint_state(ts, x, layout),
                      build_knn_state(ts, x, layout)):
            assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-10
