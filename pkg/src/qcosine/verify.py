"""Self-contained invariant suites backing the `verify` CLI command.

Each suite replays one of the package's analytic identities against a
brute-force or fully simulated counterpart on freshly drawn random
instances and reports pass/fail counts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import classifier, oracle, qknn
from .circuits import build_example_circuits, build_swap_test, decompose
from .encoding import DataVector, TrainingSet, amplitude_encode
from .statevector import (
    StateVector,
    inner_product,
    probability_of,
    random_state,
    run_circuit,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: int
    failed: int

    @property
    def ok(self) -> bool:
        return self.failed == 0


def _random_instance(rng: np.random.Generator, positive: bool = False):
    n = int(rng.choice([1, 2, 3, 4, 5, 6]))
    d = int(rng.choice([2, 3, 4, 5, 6]))
    vecs = rng.normal(size=(n + 1, d))
    if positive:
        vecs = np.abs(vecs) + 1e-3
    labels = rng.choice([-1, 1], size=n)
    ts = TrainingSet(list(zip(vecs[:-1], labels)))
    return ts, DataVector(vecs[-1])


def swap_test_identity(trials: int, rng: np.random.Generator) -> SuiteResult:
    """Simulated P(1) vs (1 - |<phi|psi>|^2)/2 on random product pairs."""
    passed = failed = 0
    for _ in range(trials):
        w = int(rng.choice([1, 2]))
        phi = random_state(w, rng)
        psi = random_state(w, rng)
        amps = np.zeros(1 << (2 * w + 1), dtype=complex)
        outer = np.kron(phi.amplitudes, psi.amplitudes)  # phi on high bits
        amps[0::2] = outer  # control qubit 0 in |0>
        state = StateVector(2 * w + 1, amps)
        test = build_swap_test(0, tuple(range(1, w + 1)),
                               tuple(range(w + 1, 2 * w + 1)),
                               num_qubits=2 * w + 1)
        p1 = probability_of(run_circuit(state, test), 0, 1)
        overlap = abs(inner_product(phi, psi)) ** 2
        if abs(p1 - 0.5 * (1.0 - overlap)) < 1e-10:
            passed += 1
        else:
            failed += 1
    return SuiteResult("swap-test-identity", passed, failed)


def encoding_cosine(trials: int, rng: np.random.Generator) -> SuiteResult:
    """<encode(a)|encode(b)> vs the classical cosine."""
    passed = failed = 0
    for _ in range(trials):
        d = int(rng.choice([2, 3, 4, 7, 8]))
        a, b = rng.normal(size=d), rng.normal(size=d)
        q = inner_product(amplitude_encode(a), amplitude_encode(b)).real
        if abs(q - oracle.cosine_similarity(a, b)) < 1e-12:
            passed += 1
        else:
            failed += 1
    return SuiteResult("encoding-cosine", passed, failed)


def classifier_formula(trials: int, rng: np.random.Generator) -> SuiteResult:
    """Closed-form P(1) vs the full prepare-plus-SWAP-test simulation."""
    passed = failed = 0
    for _ in range(trials):
        ts, x = _random_instance(rng)
        diff = abs(classifier.analytic_p1(ts, x) - classifier.simulate_p1(ts, x))
        if diff < 1e-10:
            passed += 1
        else:
            failed += 1
    return SuiteResult("classifier-formula", passed, failed)


def knn_formulas(trials: int, rng: np.random.Generator) -> SuiteResult:
    """Ancilla/index probabilities and the closed-form score identity."""
    passed = failed = 0
    for _ in range(trials):
        ts, x = _random_instance(rng)
        with warnings.catch_warnings():
            # random-sign instances are fine for checking the formulas
            warnings.simplefilter("ignore", UserWarning)
            probs, _ = qknn.simulate_joint_distribution(ts, x)
        ok = True
        for alpha in (0, 1):
            p_alpha = probs[alpha].sum()
            ok &= abs(p_alpha - qknn.analytic_ancilla_prob(ts, x, alpha)) < 1e-10
            if p_alpha > 1e-9:
                for i in range(ts.n_points):
                    ok &= abs(probs[alpha, i] / p_alpha
                              - qknn.analytic_index_prob(ts, x, i, alpha)) < 1e-10
        f = qknn.fidelities(ts, x)
        c = float(f.mean())
        if 1.0 - c * c > 1e-12:
            scores = qknn.analytic_scores(ts, x)
            for i in range(ts.n_points):
                direct = (qknn.analytic_index_prob(ts, x, i, 0)
                          - qknn.analytic_index_prob(ts, x, i, 1))
                ok &= abs(scores[i] - direct) < 1e-12
        if ok:
            passed += 1
        else:
            failed += 1
    return SuiteResult("knn-formulas", passed, failed)


def qasm_roundtrip(trials: int, rng: np.random.Generator) -> SuiteResult:
    """Decomposed example circuits act identically on random states."""
    passed = failed = 0
    circuits = build_example_circuits("+") + build_example_circuits("-")
    for t in range(trials):
        circuit = circuits[t % len(circuits)]
        lowered = decompose(circuit, native_cswap=False)
        state = random_state(circuit.num_qubits, rng)
        a = run_circuit(state, circuit).amplitudes
        b = run_circuit(state, lowered).amplitudes
        if np.linalg.norm(a - b) < 1e-9:
            passed += 1
        else:
            failed += 1
    return SuiteResult("qasm-roundtrip", passed, failed)


def oracle_bridge(trials: int, rng: np.random.Generator) -> SuiteResult:
    """decide(analytic P(1)) vs the classical model on nonzero margins."""
    passed = failed = 0
    done = 0
    while done < trials:
        ts, x = _random_instance(rng)
        p1 = classifier.analytic_p1(ts, x)
        if abs(1.0 - 4.0 * p1) < 1e-9:
            continue
        done += 1
        if classifier.decide(p1) == oracle.classical_classify(ts, x).label:
            passed += 1
        else:
            failed += 1
    return SuiteResult("oracle-bridge", passed, failed)


def run_all(seed: int = 0, quick: bool = False) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    n_small = 20 if quick else 50
    n_big = 50 if quick else 200
    return [
        swap_test_identity(n_small, rng),
        encoding_cosine(n_big, rng),
        classifier_formula(n_small, rng),
        knn_formulas(n_small, rng),
        qasm_roundtrip(8, rng),
        oracle_bridge(n_small, rng),
    ]
