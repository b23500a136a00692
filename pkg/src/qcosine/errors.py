"""Exception hierarchy shared across the package."""


class QuantumCosineError(Exception):
    """Base class for every error raised by this package."""


class InvalidCircuitError(QuantumCosineError):
    """A gate or circuit is malformed (bad indices, duplicate qubits, ...)."""


class StateNormError(QuantumCosineError):
    """A state vector lost unit norm beyond the allowed tolerance."""


class UnsupportedGateError(QuantumCosineError):
    """The OpenQASM exporter met a gate it cannot emit or decompose."""


class UnsupportedInstanceError(QuantumCosineError):
    """No explicit preparation circuit is registered for this instance."""


class DataError(QuantumCosineError):
    """Invalid classical input data (zero vector, bad label, bad CSV, ...)."""


class DegenerateSimilarityError(QuantumCosineError):
    """All training points have unit fidelity with the query; the
    neighbor score is 0/0 and ranking carries no signal."""


class InsufficientShotsError(QuantumCosineError):
    """A measurement stratum received zero shots although its analytic
    probability is nonzero; conditional frequencies would be undefined."""
