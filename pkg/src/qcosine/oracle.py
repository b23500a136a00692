"""Classical O(Nd) reference of the model and of K-NN selection.

Tie rules mirror the quantum path exactly (score 0 -> label +1, equal
similarities -> ascending index), so any disagreement between oracle and
simulator signals a real bug rather than a convention gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import DataVector, TrainingSet


@dataclass(frozen=True)
class OracleResult:
    score: float
    label: int
    per_point_cosines: tuple[float, ...]


def cosine_similarity(a, b) -> float:
    if not isinstance(a, DataVector):
        a = DataVector(a)
    if not isinstance(b, DataVector):
        b = DataVector(b)
    if a.dimension != b.dimension:
        raise ValueError(f"dimension mismatch: {a.dimension} vs {b.dimension}")
    return float(np.dot(a.components, b.components) / (a.norm * b.norm))


def classical_classify(ts: TrainingSet, x) -> OracleResult:
    """Evaluate sgn(sum_i y_i cos(x_i, x)) with the tie sgn(0) -> +1."""
    if not isinstance(x, DataVector):
        x = DataVector(x)
    cosines = [cosine_similarity(vec, x) for vec in ts.vectors]
    score = float(np.dot(ts.labels, cosines))
    label = -1 if score < 0 else 1
    return OracleResult(score, label, tuple(cosines))


def classical_knn(ts: TrainingSet, x, k: int) -> list[int]:
    """Indexes of the k largest cosine similarities, ties by lower index."""
    if not 1 <= k <= ts.n_points:
        raise ValueError(f"k must be in [1, {ts.n_points}], got {k}")
    if not isinstance(x, DataVector):
        x = DataVector(x)
    cosines = [cosine_similarity(vec, x) for vec in ts.vectors]
    order = sorted(range(ts.n_points), key=lambda i: (-cosines[i], i))
    return order[:k]
