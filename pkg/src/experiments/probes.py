"""
Single-realization observables for sweeps

Each probe is a picklable dataclass called with the realization's RNG
stream: it samples the gate schedule and the noise field, evolves the
state and returns one number.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from ..circuits.disorder import DisorderSpec, MitigationSpec, sample_noise_field
from ..circuits.topology import Topology, TopologyKind, build_schedule
from ..exact.density import DensityMatrix, mutual_information
from ..exact.haar import sample_haar_state
from ..exact.simulator import ExactSimulator, sample_gate_record
from ..replica.engine import ReplicaEngine
from ..replica.observables import correlation_metric, renyi2_probe, sign_resolved_traces
from ..replica.state import init_haar_global


class Engine(Enum):
    REPLICA = "replica"
    EXACT = "exact"


class Probe(Enum):
    I_AB = "I_ab"
    MUTUAL_INFORMATION = "mutual-information"
    RENYI2 = "renyi2-probe"
    SIGN_TRACES = "sign-traces"
    FIDELITIES = "fidelities"


ENGINE_PROBES = {
    Engine.REPLICA: (Probe.I_AB, Probe.RENYI2, Probe.SIGN_TRACES),
    Engine.EXACT: (Probe.MUTUAL_INFORMATION, Probe.RENYI2, Probe.FIDELITIES),
}


def check_probe(engine: Engine, probe: Probe) -> None:
    valid = [p.value for p in ENGINE_PROBES[engine]]
    if probe not in ENGINE_PROBES[engine]:
        raise ValueError(f"Invalid probe '{probe.value}' for engine '{engine.value}'. Valid: {valid}")


def probe_pair(kind: TopologyKind, n: int, rng: np.random.Generator) -> Tuple[int, int]:
    """Random distinct pair (all-to-all) or a random site and its antipode (chain)"""
    if kind == TopologyKind.ALL_TO_ALL:
        a, b = rng.choice(n, size=2, replace=False)
        return int(a), int(b)
    a = int(rng.integers(n))
    return a, (a + n // 2) % n


@dataclass(frozen=True)
class ReplicaRealization:
    """One disorder realization evolved with the replica engine from a global Haar state"""
    topology: Topology
    depth: int
    disorder: DisorderSpec
    mitigation: MitigationSpec
    probe: Probe

    def __call__(self, rng: np.random.Generator) -> float:
        n = self.topology.n_qubits
        schedule = build_schedule(self.topology, self.depth, rng)
        field = sample_noise_field(self.disorder, n, self.depth, rng)
        state = init_haar_global(n, signed=self.probe == Probe.SIGN_TRACES)
        ReplicaEngine().evolve(state, schedule, field, self.mitigation)

        a, b = probe_pair(self.topology.kind, n, rng)
        if self.probe == Probe.I_AB:
            return correlation_metric(state, a, b)
        if self.probe == Probe.RENYI2:
            return renyi2_probe(state, a)
        if self.probe == Probe.SIGN_TRACES:
            trace_plus, _ = sign_resolved_traces(state)
            return math.log(trace_plus)
        check_probe(Engine.REPLICA, self.probe)
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class ExactRealization:
    """One circuit and disorder realization evolved at the density-matrix level"""
    topology: Topology
    depth: int
    disorder: DisorderSpec
    mitigation: MitigationSpec
    probe: Probe

    def __call__(self, rng: np.random.Generator) -> float:
        n = self.topology.n_qubits
        schedule = build_schedule(self.topology, self.depth, rng)
        field = sample_noise_field(self.disorder, n, self.depth, rng)
        record = sample_gate_record(schedule, rng)
        simulator = ExactSimulator()

        if self.probe == Probe.FIDELITIES:
            f_m = simulator.mitigated_fidelity(record, field, self.mitigation)
            return -math.log(f_m) / n if f_m > 0 else math.nan

        rho0 = DensityMatrix.from_statevector(sample_haar_state(n, rng))
        rho = simulator.replay(rho0, record, field, self.mitigation.q_a)
        a, b = probe_pair(self.topology.kind, n, rng)
        if self.probe == Probe.MUTUAL_INFORMATION:
            return mutual_information(rho, a, b)
        if self.probe == Probe.RENYI2:
            purity = float(np.real(np.trace(rho.reduced([a]) @ rho.reduced([a]))))
            return -math.log2(purity) if purity > 0 else math.nan
        check_probe(Engine.EXACT, self.probe)
        raise AssertionError("unreachable")
