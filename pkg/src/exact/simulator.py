"""
Exact Simulator - Density-matrix evolution of one noisy, mitigated circuit

This simulator:
1. Samples Haar gates for a schedule and keeps them in a GateRecord
2. Replays a record with any combination of noise and antinoise
3. Derives the four output distributions and the mitigated fidelity
"""

import logging
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from ..circuits.disorder import MitigationSpec, NoiseField
from ..circuits.topology import GateSchedule
from .benchmarks import OutcomeDistribution, output_distribution
from .density import DensityMatrix, apply_2q_unitary, apply_antinoise_map, apply_depolarizing
from .haar import sample_haar_2q
from .records import GateApplication, GateRecord

LayerObserver = Callable[[int, DensityMatrix], None]


def sample_gate_record(schedule: GateSchedule, rng: np.random.Generator) -> GateRecord:
    """Draw one Haar unitary per pair, layer by layer"""
    layers = [
        [GateApplication(pair=pair, unitary=sample_haar_2q(rng)) for pair in layer]
        for layer in schedule.layers
    ]
    return GateRecord(n_qubits=schedule.n_qubits, layers=layers)


class ExactSimulator:
    """Applies gate records and single-site channels to a DensityMatrix"""

    def __init__(self):
        self.logger = logging.getLogger("ExactSimulator")

    def replay(
        self,
        rho0: DensityMatrix,
        record: GateRecord,
        field: Optional[NoiseField] = None,
        q_a: float = 0.0,
        observer: Optional[LayerObserver] = None,
    ) -> DensityMatrix:
        """
        Run the recorded gates on a copy of rho0.

        Each layer applies its gates, then depolarizing noise (when a field is
        given) and antinoise (when q_a > 0) on every site.
        """
        if record.n_qubits != rho0.n:
            raise ValueError(f"Record n={record.n_qubits} does not match state n={rho0.n}")
        if field is not None and field.depth < record.depth:
            raise ValueError(f"Noise field depth {field.depth} shorter than record depth {record.depth}")

        rho = rho0.copy()
        for t, layer in enumerate(record.layers):
            for gate in layer:
                apply_2q_unitary(rho, gate.unitary, gate.pair)
            for x in range(rho.n):
                if field is not None:
                    apply_depolarizing(rho, x, float(field.rates[x, t]))
                if q_a > 0.0:
                    apply_antinoise_map(rho, x, q_a)
            if observer is not None:
                observer(t + 1, rho)
        return rho

    def evolve_circuit(
        self,
        rho0: DensityMatrix,
        schedule: GateSchedule,
        field: NoiseField,
        mitigation: MitigationSpec,
        rng: np.random.Generator,
        observer: Optional[LayerObserver] = None,
    ) -> Tuple[DensityMatrix, GateRecord]:
        record = sample_gate_record(schedule, rng)
        rho = self.replay(rho0, record, field, mitigation.q_a, observer)
        self.logger.debug(f"Evolved n={rho0.n} through d={schedule.depth} layers")
        return rho, record

    def replay_distributions(
        self, record: GateRecord, field: NoiseField, mitigation: MitigationSpec
    ) -> Dict[str, OutcomeDistribution]:
        """p_0 (noiseless), p_n (noise), p_a (antinoise), p_an (noise then antinoise) from |0...0>"""
        rho0 = DensityMatrix.zero_state(record.n_qubits)
        return {
            "p_0": output_distribution(self.replay(rho0, record)),
            "p_n": output_distribution(self.replay(rho0, record, field=field)),
            "p_a": output_distribution(self.replay(rho0, record, q_a=mitigation.q_a)),
            "p_an": output_distribution(self.replay(rho0, record, field=field, q_a=mitigation.q_a)),
        }

    def mitigated_fidelity(
        self,
        record: GateRecord,
        field: NoiseField,
        mitigation: MitigationSpec,
        rho0: Optional[DensityMatrix] = None,
    ) -> float:
        """Tr[antinoise-only branch . noise-only branch] for one gate record"""
        if rho0 is None:
            rho0 = DensityMatrix.zero_state(record.n_qubits)
        antinoise_branch = self.replay(rho0, record, q_a=mitigation.q_a)
        noise_branch = self.replay(rho0, record, field=field)
        return float(np.real(np.sum(antinoise_branch.matrix * noise_branch.matrix.T)))


def evolve_circuit(
    rho0: DensityMatrix,
    schedule: GateSchedule,
    field: NoiseField,
    mitigation: MitigationSpec,
    rng: np.random.Generator,
) -> Tuple[DensityMatrix, GateRecord]:
    return ExactSimulator().evolve_circuit(rho0, schedule, field, mitigation, rng)


def replay_distributions(
    record: GateRecord, field: NoiseField, mitigation: MitigationSpec
) -> Dict[str, OutcomeDistribution]:
    return ExactSimulator().replay_distributions(record, field, mitigation)


def fidelity_F_M(
    schedule: GateSchedule,
    field: NoiseField,
    mitigation: MitigationSpec,
    rho0: Optional[DensityMatrix],
    rng: np.random.Generator,
) -> float:
    """Sample a gate record for the schedule and return its mitigated fidelity"""
    record = sample_gate_record(schedule, rng)
    return ExactSimulator().mitigated_fidelity(record, field, mitigation, rho0)
