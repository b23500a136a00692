"""Quantum K-nearest-neighbor selection and the hybrid pipeline.

Each shot prepares the two-register input state, applies the
multi-qubit SWAP test (one Fredkin per data qubit, all controlled by
the ancilla), measures the ancilla (alpha) and then the index register
(i). Tallies are collected jointly and stratified afterwards; the
per-index score estimate freq(i|0) - freq(i|1) grows strictly with the
fidelity |<x|x_i>|^2, so the top-K scores name the nearest neighbors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .classifier import ClassificationResult, SamplingConfig, run_classification
from .circuits import build_swap_test
from .encoding import DataVector, EncodingLayout, TrainingSet, build_knn_state
from .errors import DataError, DegenerateSimilarityError, InsufficientShotsError
from .oracle import cosine_similarity
from .statevector import StateVector, run_circuit

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class KnnConfig:
    k: int
    shots: int
    master_seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise DataError(f"k must be >= 1, got {self.k}")
        if self.shots < 1:
            raise DataError(f"shots must be >= 1, got {self.shots}")


@dataclass(frozen=True)
class KnnSelection:
    counts: dict            # outcome alpha -> per-index tally array
    score_estimates: np.ndarray
    selected: list[int]
    analytic_scores: np.ndarray


def fidelities(ts: TrainingSet, x) -> np.ndarray:
    """f_i = cos(x_i, x)^2, the squared overlap of the encoded states."""
    if not isinstance(x, DataVector):
        x = DataVector(x)
    return np.array([cosine_similarity(vec, x) ** 2 for vec in ts.vectors])


def analytic_ancilla_prob(ts: TrainingSet, x, alpha: int) -> float:
    """P(alpha) = 1/2 + (-1)^alpha * (1/2N) sum_i f_i."""
    if alpha not in (0, 1):
        raise DataError(f"alpha must be 0 or 1, got {alpha}")
    mean_f = float(np.mean(fidelities(ts, x)))
    sign = 1.0 if alpha == 0 else -1.0
    return 0.5 + sign * 0.5 * mean_f


def analytic_index_prob(ts: TrainingSet, x, i: int, alpha: int) -> float:
    """P(i|alpha) = (1 + (-1)^alpha f_i) / (N + (-1)^alpha sum_j f_j)."""
    f = fidelities(ts, x)
    if not 0 <= i < ts.n_points:
        raise DataError(f"index {i} out of range [0, {ts.n_points})")
    if analytic_ancilla_prob(ts, x, alpha) <= 0.0:
        raise DataError(f"cannot condition on zero-probability outcome {alpha}")
    sign = 1.0 if alpha == 0 else -1.0
    return float((1.0 + sign * f[i]) / (ts.n_points + sign * f.sum()))


def analytic_scores(ts: TrainingSet, x) -> np.ndarray:
    """Score 2 (f_i - C) / (N (1 - C^2)) for every index, C = mean f."""
    f = fidelities(ts, x)
    c = float(f.mean())
    denom = ts.n_points * (1.0 - c * c)
    if 1.0 - c * c <= DEGENERACY_TOL:
        raise DegenerateSimilarityError(
            "all training points have unit fidelity with the query; "
            "the neighbor score carries no signal"
        )
    return 2.0 * (f - c) / denom


def knn_score(ts: TrainingSet, x, i: int) -> float:
    scores = analytic_scores(ts, x)
    if not 0 <= i < ts.n_points:
        raise DataError(f"index {i} out of range [0, {ts.n_points})")
    return float(scores[i])


def _top_k(scores: np.ndarray, k: int) -> list[int]:
    # ties broken by the lower index
    order = sorted(range(scores.size), key=lambda i: (-scores[i], i))
    return order[:k]


def analytic_knn_selection(ts: TrainingSet, x, k: int) -> list[int]:
    """Top-K indexes by the analytic score, degenerate case -> first K."""
    if not 1 <= k <= ts.n_points:
        raise DataError(f"k must be in [1, {ts.n_points}], got {k}")
    try:
        scores = analytic_scores(ts, x)
    except DegenerateSimilarityError:
        warnings.warn("all neighbors equally near; selecting the first K "
                      "indexes", UserWarning, stacklevel=2)
        return list(range(k))
    return _top_k(scores, k)


def simulate_joint_distribution(ts: TrainingSet, x) -> tuple[np.ndarray, StateVector]:
    """Exact joint distribution P(alpha, i) after the multi-register test.

    Returns (probs, state) with probs of shape (2, N) and the full
    post-SWAP-test state (ancilla not yet measured).
    """
    layout = EncodingLayout.for_training_set(ts)
    state = build_knn_state(ts, x, layout)
    test = build_swap_test(layout.knn_ancilla,
                           layout.knn_train_register,
                           layout.knn_query_register,
                           num_qubits=layout.num_knn_qubits)
    state = run_circuit(state, test)

    dim = state.amplitudes.size
    idx = np.arange(dim)
    alpha_bits = idx & 1
    index_vals = idx >> (2 * layout.n + 1)
    weights = np.abs(state.amplitudes) ** 2
    probs = np.zeros((2, ts.n_points))
    for alpha in (0, 1):
        for i in range(ts.n_points):
            probs[alpha, i] = weights[(alpha_bits == alpha) & (index_vals == i)].sum()
    return probs, state


def run_knn_selection(ts: TrainingSet, x, cfg: KnnConfig) -> KnnSelection:
    """Sample (alpha, i) tallies and pick the K highest-scoring indexes."""
    if cfg.k > ts.n_points:
        raise DataError(f"k={cfg.k} exceeds the {ts.n_points} training points")
    n = ts.n_points
    probs, _ = simulate_joint_distribution(ts, x)
    flat = np.clip(probs.reshape(-1), 0.0, None)
    flat = flat / flat.sum()
    rng = np.random.default_rng(cfg.master_seed)
    draws = rng.choice(2 * n, size=cfg.shots, p=flat)
    tallies = np.bincount(draws, minlength=2 * n).reshape(2, n)
    counts = {0: tallies[0], 1: tallies[1]}

    f = fidelities(ts, x)
    c = float(f.mean())
    if 1.0 - c * c <= DEGENERACY_TOL:
        warnings.warn("all neighbors equally near; selecting the first K "
                      "indexes", UserWarning, stacklevel=2)
        return KnnSelection(
            counts=counts,
            score_estimates=np.zeros(n),
            selected=list(range(cfg.k)),
            analytic_scores=np.zeros(n),
        )

    n0, n1 = int(tallies[0].sum()), int(tallies[1].sum())
    if n0 == 0 or n1 == 0:
        empty = 0 if n0 == 0 else 1
        raise InsufficientShotsError(
            f"outcome alpha={empty} received zero shots out of {cfg.shots} "
            f"(analytic P({empty}) = "
            f"{analytic_ancilla_prob(ts, x, empty):.6g}); increase shots"
        )
    estimates = tallies[0] / n0 - tallies[1] / n1
    return KnnSelection(
        counts=counts,
        score_estimates=estimates,
        selected=_top_k(estimates, cfg.k),
        analytic_scores=analytic_scores(ts, x),
    )


def hybrid_classify(ts: TrainingSet, x, knn_cfg: KnnConfig,
                    cls_cfg: SamplingConfig) -> int:
    """Quantum K-NN selection followed by classification on the K picks."""
    selection = run_knn_selection(ts, x, knn_cfg)
    restricted = ts.subset(selection.selected)
    return run_classification(restricted, x, cls_cfg).label


def hybrid_classify_detailed(ts: TrainingSet, x, knn_cfg: KnnConfig,
                             cls_cfg: SamplingConfig
                             ) -> tuple[KnnSelection, ClassificationResult]:
    """Like hybrid_classify but returning both stage results (CLI path)."""
    selection = run_knn_selection(ts, x, knn_cfg)
    restricted = ts.subset(selection.selected)
    return selection, run_classification(restricted, x, cls_cfg)
