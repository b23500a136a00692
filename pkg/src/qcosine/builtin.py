"""The bundled two-point instance (N=2, d=2).

Feature values are derived from the exact rotation angles used by the
explicit preparation circuits, so the direct state-builder path and the
gate-level path describe the same instance to machine precision. The
published rounded values (0.718, 0.696) / (0.884, 0.468) agree with
these to three decimals.
"""

from __future__ import annotations

import math

from .circuits import QUERY_ANGLE, TRAIN_ANGLE
from .encoding import DataVector, TrainingSet


def example_training_set() -> TrainingSet:
    half = TRAIN_ANGLE / 2.0
    return TrainingSet([
        (DataVector([1.0, 0.0]), +1),
        (DataVector([math.cos(half), math.sin(half)]), -1),
    ])


def example_query() -> DataVector:
    half = QUERY_ANGLE / 2.0
    return DataVector([math.cos(half), math.sin(half)])
