"""Commutation-derived quantum filters over Clifford circuits."""

from . import analytics, channels, clifford, experiments, filters, noisy_sim, pauli
from .channels import PauliChannel, depolarizing
from .clifford import CliffordCircuit, CliffordTableau, brickwork_circuit
from .filters import ae_filter, channel_correction, commutation_filter
from .pauli import PauliString

__all__ = [
    "analytics", "channels", "clifford", "experiments", "filters",
    "noisy_sim", "pauli", "PauliChannel", "depolarizing", "CliffordCircuit",
    "CliffordTableau", "brickwork_circuit", "ae_filter", "channel_correction",
    "commutation_filter", "PauliString",
]

__version__ = "0.1.0"
