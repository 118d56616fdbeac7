"""Physical-circuit simulation of filters with noisy controlled-Pauli gates."""

from .circuit import (
    ConditionalPauli,
    DenseFault,
    FaultSite,
    MeasureX,
    NoisyCircuit,
    Unitary1Q,
    build_ae_filter_circuit,
    build_correction_filter_circuit,
    build_probe_filter_circuit,
    build_single_pauli_filter,
    propagate_fault,
)
from .dense_oracle import DenseRunResult, dense_oracle_run
from .monte_carlo import SimResult, monte_carlo

__all__ = [
    "ConditionalPauli", "DenseFault", "FaultSite", "MeasureX", "NoisyCircuit",
    "Unitary1Q", "build_ae_filter_circuit", "build_correction_filter_circuit",
    "build_probe_filter_circuit", "build_single_pauli_filter",
    "propagate_fault", "DenseRunResult", "dense_oracle_run", "SimResult",
    "monte_carlo",
]
