"""
Replica Engine - Layer-by-layer evolution of the two-copy state

Drives the transition maps over a gate schedule and noise field, with an
optional per-layer observer for growth fits and trace checks.
"""

import logging
from typing import Callable, Optional

from ..circuits.disorder import MitigationSpec, NoiseField
from ..circuits.topology import GateSchedule
from .observables import trace
from .state import ReplicaState
from .transitions import step_layer

Observer = Callable[[int, ReplicaState], None]


class ReplicaEngine:
    """Evolves a ReplicaState through noisy, mitigated circuit layers"""

    def __init__(self, check_trace: bool = False, trace_tolerance: float = 1e-9):
        self.check_trace = check_trace
        self.trace_tolerance = trace_tolerance
        self.logger = logging.getLogger("ReplicaEngine")

    def evolve(
        self,
        state: ReplicaState,
        schedule: GateSchedule,
        field: NoiseField,
        mitigation: MitigationSpec,
        observer: Optional[Observer] = None,
    ) -> ReplicaState:
        """
        Apply every layer of the schedule in place.

        The observer is called as observer(t, state) after layer t (1-based).
        """
        if schedule.n_qubits != state.n or field.n_qubits != state.n:
            raise ValueError(
                f"Dimension mismatch: state n={state.n}, schedule n={schedule.n_qubits}, "
                f"field n={field.n_qubits}"
            )
        if field.depth < schedule.depth:
            raise ValueError(
                f"Noise field depth {field.depth} shorter than schedule depth {schedule.depth}"
            )

        for t, layer in enumerate(schedule.layers):
            step_layer(state, layer, field.layer(t), mitigation.q_a)
            if self.check_trace:
                tr = trace(state)
                if abs(tr - 1.0) > self.trace_tolerance:
                    self.logger.warning(f"Trace drifted to {tr:.12g} after layer {t + 1}")
            self.logger.debug(f"Layer {t + 1}/{schedule.depth} applied to n={state.n}")
            if observer is not None:
                observer(t + 1, state)
        return state


def create_replica_engine(check_trace: bool = False) -> ReplicaEngine:
    return ReplicaEngine(check_trace=check_trace)
