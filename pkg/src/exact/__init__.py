"""Exact density-matrix simulation of single circuit realizations"""

from .density import (
    PAULI,
    DensityMatrix,
    SpectralDecomp,
    apply_2q_unitary,
    apply_antinoise_map,
    apply_depolarizing,
    mutual_information,
    spectrum,
    von_neumann_entropy,
)
from .haar import sample_haar_2q, sample_haar_state
from .records import GateApplication, GateRecord, load_gate_record, save_gate_record
from .benchmarks import (
    DistributionKind,
    OutcomeDistribution,
    estimate_xeb_from_samples,
    format_bitstring,
    output_distribution,
    sample_outcomes,
    xeb,
    xeb_circuit_averaged,
    xeb_mitigated,
)
from .simulator import (
    ExactSimulator,
    evolve_circuit,
    fidelity_F_M,
    replay_distributions,
    sample_gate_record,
)
from .toy import (
    PrefactorStats,
    ToyGate,
    ToyModelReport,
    log_prefactor_statistics,
    pauli_prefactor_check,
    swap_toy_model,
    two_site_toy_model,
)

__all__ = [
    "PAULI",
    "DensityMatrix",
    "SpectralDecomp",
    "apply_2q_unitary",
    "apply_antinoise_map",
    "apply_depolarizing",
    "mutual_information",
    "spectrum",
    "von_neumann_entropy",
    "sample_haar_2q",
    "sample_haar_state",
    "GateApplication",
    "GateRecord",
    "load_gate_record",
    "save_gate_record",
    "DistributionKind",
    "OutcomeDistribution",
    "estimate_xeb_from_samples",
    "format_bitstring",
    "output_distribution",
    "sample_outcomes",
    "xeb",
    "xeb_circuit_averaged",
    "xeb_mitigated",
    "ExactSimulator",
    "evolve_circuit",
    "fidelity_F_M",
    "replay_distributions",
    "sample_gate_record",
    "PrefactorStats",
    "ToyGate",
    "ToyModelReport",
    "log_prefactor_statistics",
    "pauli_prefactor_check",
    "swap_toy_model",
    "two_site_toy_model",
]
