"""Classical data validation and construction of the algorithm's states.

All builders fill amplitudes directly (an idealized QRAM stand-in);
explicit preparation circuits exist only for the bundled two-point
instance, see :mod:`qcosine.circuits`.

Register layout of the classifier states (little-endian bit positions):
label qubit 0, data qubits 1..n, index qubits above, and for the joint
state one ancilla on top. The K-NN state puts its ancilla at qubit 0,
the query copy at 1..n, the training copy at n+1..2n and the index
register on top.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .statevector import StateVector

SQRT1_2 = 1.0 / math.sqrt(2.0)


class DataVector:
    """Real feature vector with a cached 2-norm; zero vectors are rejected."""

    def __init__(self, components):
        comps = np.asarray(components, dtype=float)
        if comps.ndim != 1 or comps.size == 0:
            raise DataError(f"expected a 1-D nonempty vector, got shape {comps.shape}")
        if not np.all(np.isfinite(comps)):
            raise DataError("vector has non-finite components")
        norm = float(np.linalg.norm(comps))
        if norm == 0.0:
            raise DataError("zero vector: cosine similarity is undefined")
        self.components = comps
        self.norm = norm

    @property
    def dimension(self) -> int:
        return self.components.size

    def normalized(self) -> np.ndarray:
        return self.components / self.norm

    def __repr__(self):
        return f"DataVector({self.components.tolist()})"


class TrainingSet:
    """N labeled vectors with labels in {-1, +1} and bits b_i = (1-y_i)/2."""

    def __init__(self, points):
        pts = []
        for vec, label in points:
            if not isinstance(vec, DataVector):
                vec = DataVector(vec)
            label = int(label)
            if label not in (-1, 1):
                raise DataError(f"label must be -1 or +1, got {label}")
            pts.append((vec, label))
        if not pts:
            raise DataError("training set must contain at least one point")
        d = pts[0][0].dimension
        for i, (vec, _) in enumerate(pts):
            if vec.dimension != d:
                raise DataError(
                    f"point {i} has dimension {vec.dimension}, expected {d}"
                )
        self.points = pts

    @classmethod
    def from_arrays(cls, features, labels) -> "TrainingSet":
        return cls(list(zip(np.atleast_2d(np.asarray(features, dtype=float)),
                            labels)))

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def dimension(self) -> int:
        return self.points[0][0].dimension

    @property
    def labels(self) -> np.ndarray:
        return np.array([y for _, y in self.points], dtype=int)

    @property
    def label_bits(self) -> np.ndarray:
        return (1 - self.labels) // 2

    @property
    def vectors(self) -> list[DataVector]:
        return [v for v, _ in self.points]

    def subset(self, indexes) -> "TrainingSet":
        return TrainingSet([self.points[i] for i in indexes])


def _qubits_for(count: int) -> int:
    return max(int(math.ceil(math.log2(count))), 0) if count > 1 else 0


@dataclass(frozen=True)
class EncodingLayout:
    """Register sizes and qubit positions derived from (N, d).

    ``n`` data qubits hold a zero-padded 2**n >= d amplitude encoding;
    ``index_qubits`` enumerate the N training points (zero-amplitude
    padding branches when N is not a power of two).
    """

    n_points: int
    dimension: int
    n: int
    index_qubits: int

    @classmethod
    def for_data(cls, n_points: int, dimension: int) -> "EncodingLayout":
        if n_points < 1:
            raise DataError("need at least one training point")
        if dimension < 1:
            raise DataError("need at least one feature")
        n = max(_qubits_for(dimension), 1)
        return cls(n_points, dimension, n, _qubits_for(n_points))

    @classmethod
    def for_training_set(cls, ts: TrainingSet) -> "EncodingLayout":
        return cls.for_data(ts.n_points, ts.dimension)

    # classifier-state positions
    @property
    def label_qubit(self) -> int:
        return 0

    @property
    def data_register(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    @property
    def index_register(self) -> tuple[int, ...]:
        return tuple(range(self.n + 1, self.n + 1 + self.index_qubits))

    @property
    def num_state_qubits(self) -> int:
        return 1 + self.n + self.index_qubits

    @property
    def joint_ancilla(self) -> int:
        return self.num_state_qubits

    @property
    def num_joint_qubits(self) -> int:
        return self.num_state_qubits + 1

    # K-NN-state positions
    @property
    def knn_ancilla(self) -> int:
        return 0

    @property
    def knn_query_register(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    @property
    def knn_train_register(self) -> tuple[int, ...]:
        return tuple(range(self.n + 1, 2 * self.n + 1))

    @property
    def knn_index_register(self) -> tuple[int, ...]:
        return tuple(range(2 * self.n + 1, 2 * self.n + 1 + self.index_qubits))

    @property
    def num_knn_qubits(self) -> int:
        return 1 + 2 * self.n + self.index_qubits


def amplitude_encode(v: DataVector) -> StateVector:
    """Encode v / ||v|| into the amplitudes of ceil(log2 d) qubits.

    Features are zero-padded up to the register dimension, which leaves
    every pairwise inner product unchanged, so
    <encode(a)|encode(b)> = cos(a, b).
    """
    if not isinstance(v, DataVector):
        v = DataVector(v)
    n = max(_qubits_for(v.dimension), 1)
    amps = np.zeros(1 << n, dtype=complex)
    amps[: v.dimension] = v.normalized()
    return StateVector(n, amps)


def build_training_state(ts: TrainingSet,
                         layout: EncodingLayout | None = None) -> StateVector:
    """Training superposition (1/sqrt N) sum_i |i>|x_i>|b_i>."""
    layout = layout or EncodingLayout.for_training_set(ts)
    amps = np.zeros(1 << layout.num_state_qubits, dtype=complex)
    scale = 1.0 / math.sqrt(ts.n_points)
    for i, (vec, label) in enumerate(ts.points):
        b = (1 - label) // 2
        base = (i << (layout.n + 1)) | b
        amps[base + (np.arange(vec.dimension) << 1)] = scale * vec.normalized()
    return StateVector(layout.num_state_qubits, amps)


def build_query_state(x: DataVector,
                      layout: EncodingLayout) -> StateVector:
    """Query superposition (1/sqrt N) sum_i |i>|x>|->."""
    if not isinstance(x, DataVector):
        x = DataVector(x)
    if x.dimension != layout.dimension:
        raise DataError(
            f"query dimension {x.dimension} != training dimension "
            f"{layout.dimension}"
        )
    amps = np.zeros(1 << layout.num_state_qubits, dtype=complex)
    coeff = x.normalized() / math.sqrt(layout.n_points)
    offsets = np.arange(x.dimension) << 1
    for i in range(layout.n_points):
        base = i << (layout.n + 1)
        amps[base + offsets] = coeff * SQRT1_2          # label bit 0
        amps[base + offsets + 1] = -coeff * SQRT1_2     # label bit 1
    return StateVector(layout.num_state_qubits, amps)


def build_joint_state(ts: TrainingSet, x: DataVector,
                      layout: EncodingLayout | None = None) -> StateVector:
    """Joint input (|X>|0>_a + |psi_x>|1>_a) / sqrt(2), ancilla on top."""
    layout = layout or EncodingLayout.for_training_set(ts)
    half = 1 << layout.num_state_qubits
    amps = np.zeros(2 * half, dtype=complex)
    amps[:half] = build_training_state(ts, layout).amplitudes * SQRT1_2
    amps[half:] = build_query_state(x, layout).amplitudes * SQRT1_2
    return StateVector(layout.num_joint_qubits, amps)


def _warn_negative_entries(ts: TrainingSet, x: DataVector):
    vecs = [v.components for v in ts.vectors] + [x.components]
    if any(np.any(v < 0) for v in vecs):
        warnings.warn(
            "vectors with negative entries: the K-NN score ranks by squared "
            "overlap and cannot distinguish a vector from its negation",
            UserWarning,
            stacklevel=3,
        )


def build_knn_state(ts: TrainingSet, x: DataVector,
                    layout: EncodingLayout | None = None) -> StateVector:
    """K-NN input (1/sqrt N) sum_i |i>|x_i>|x>|0>_a."""
    if not isinstance(x, DataVector):
        x = DataVector(x)
    layout = layout or EncodingLayout.for_training_set(ts)
    if x.dimension != layout.dimension:
        raise DataError(
            f"query dimension {x.dimension} != training dimension "
            f"{layout.dimension}"
        )
    _warn_negative_entries(ts, x)
    n = layout.n
    amps = np.zeros(1 << layout.num_knn_qubits, dtype=complex)
    xq = x.normalized() / math.sqrt(ts.n_points)
    q_offsets = np.arange(x.dimension) << 1
    for i, (vec, _) in enumerate(ts.points):
        xi = vec.normalized()
        for j_train in range(vec.dimension):
            base = (i << (2 * n + 1)) | (j_train << (n + 1))
            amps[base + q_offsets] = xi[j_train] * xq
    return StateVector(layout.num_knn_qubits, amps)
