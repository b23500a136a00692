"""State-vector simulator and CLI for the cosine-similarity quantum
binary classifier and its hybrid quantum K-NN extension."""

from .circuits import (
    Circuit,
    Gate,
    GateKind,
    build_example_circuits,
    build_swap_test,
    decompose,
    export_qasm,
)
from .classifier import (
    ClassificationResult,
    SamplingConfig,
    analytic_p1,
    classify_analytic,
    classify_via_circuit,
    decide,
    run_classification,
    shots_for_accuracy,
    simulate_p1,
)
from .encoding import (
    DataVector,
    EncodingLayout,
    TrainingSet,
    amplitude_encode,
    build_joint_state,
    build_knn_state,
    build_query_state,
    build_training_state,
)
from .oracle import OracleResult, classical_classify, classical_knn, cosine_similarity
from .qknn import (
    KnnConfig,
    KnnSelection,
    analytic_ancilla_prob,
    analytic_index_prob,
    analytic_knn_selection,
    hybrid_classify,
    knn_score,
    run_knn_selection,
)
from .statevector import (
    StateVector,
    apply_gate,
    inner_product,
    measure_qubit,
    probability_of,
    run_circuit,
)

__version__ = "0.1.0"
