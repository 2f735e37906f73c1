"""
Sweeps over system size and disorder strength

1. SweepSpec describes the grid (sizes x sigma/q_bar) and the probe
2. sweep evaluates every grid point with an EnsembleRunner
3. locate_peak / peak_positions track where each size's curve peaks
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..circuits.disorder import DisorderMode, DisorderSpec, MitigationMode, MitigationSpec
from ..circuits.topology import Topology, TopologyKind
from .ensemble import EnsembleResult, EnsembleRunner
from .probes import Engine, ExactRealization, Probe, ReplicaRealization, check_probe

logger = logging.getLogger("SweepRunner")

EXACT_MAX_QUBITS = 12


@dataclass
class SweepSpec:
    """Grid of (N, sigma/q_bar) points evaluated at a depth set by the depth rule"""
    engine: Engine
    topology_kind: TopologyKind
    sizes: List[int]
    sigma_ratios: List[float]
    realizations: int
    master_seed: int
    probe: Probe
    q_bar: float = 0.2  # at 0.1 the grid sigma/q_bar <= 1 stays below the threshold
    p: float = 0.5
    disorder_mode: Optional[DisorderMode] = None
    depth_rule: str = "n"  # "n": d = N, "fixed": d = depth
    depth: Optional[int] = None
    mitigation_mode: MitigationMode = MitigationMode.ZERO_MEAN_FIELD
    q_a: Optional[float] = None

    def __post_init__(self):
        if not self.sizes or not self.sigma_ratios:
            raise ValueError("Sweep grids must be nonempty")
        if self.realizations < 1:
            raise ValueError(f"Invalid realizations '{self.realizations}'. Must be >= 1")
        if self.depth_rule not in ("n", "fixed"):
            raise ValueError(f"Invalid depth rule '{self.depth_rule}'. Valid: ['n', 'fixed']")
        if self.depth_rule == "fixed" and (self.depth is None or self.depth < 0):
            raise ValueError("Depth rule 'fixed' needs a depth >= 0")
        if self.mitigation_mode == MitigationMode.FIXED and self.q_a is None:
            raise ValueError("Mitigation mode 'fixed' requires q_a")
        if self.engine == Engine.EXACT and max(self.sizes) > EXACT_MAX_QUBITS:
            raise ValueError(f"Exact engine supports N <= {EXACT_MAX_QUBITS}, got {max(self.sizes)}")
        check_probe(self.engine, self.probe)
        if self.disorder_mode is None:
            # the 1D drift study uses quenched rates, the all-to-all study spacetime rates
            self.disorder_mode = (
                DisorderMode.QUENCHED
                if self.topology_kind == TopologyKind.CHAIN_1D_PERIODIC
                else DisorderMode.SPACETIME
            )

    def depth_for(self, n: int) -> int:
        return n if self.depth_rule == "n" else int(self.depth)

    def point_disorder(self, ratio: float) -> DisorderSpec:
        return DisorderSpec.from_sigma_ratio(
            ratio, self.q_bar, self.p, self.disorder_mode, self.master_seed
        )

    def point_mitigation(self, disorder: DisorderSpec) -> MitigationSpec:
        if self.mitigation_mode == MitigationMode.FIXED:
            return MitigationSpec.fixed(self.q_a)
        return MitigationSpec.zero_mean_field(disorder)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "engine": self.engine.value,
            "topology": self.topology_kind.value,
            "sizes": list(self.sizes),
            "sigma_ratios": list(self.sigma_ratios),
            "realizations": self.realizations,
            "master_seed": self.master_seed,
            "probe": self.probe.value,
            "q_bar": self.q_bar,
            "p": self.p,
            "disorder_mode": self.disorder_mode.value,
            "depth_rule": self.depth_rule,
            "depth": self.depth,
            "mitigation_mode": self.mitigation_mode.value,
            "q_a": self.q_a,
        }


def sweep(spec: SweepSpec, runner: Optional[EnsembleRunner] = None) -> List[EnsembleResult]:
    """Evaluate every (N, sigma/q_bar) point of the grid"""
    runner = runner or EnsembleRunner(spec.master_seed)
    realization_cls = ReplicaRealization if spec.engine == Engine.REPLICA else ExactRealization
    results = []
    for n in spec.sizes:
        topology = Topology(kind=spec.topology_kind, n_qubits=n)
        d = spec.depth_for(n)
        for ratio in spec.sigma_ratios:
            disorder = spec.point_disorder(ratio)
            mitigation = spec.point_mitigation(disorder)
            observable = realization_cls(topology, d, disorder, mitigation, spec.probe)
            key = {
                "n": n,
                "sigma_ratio": float(ratio),
                "depth": d,
                "probe": spec.probe.value,
                "q1": disorder.q1,
                "q2": disorder.q2,
                "q_a": mitigation.q_a,
            }
            tag = f"sweep|{spec.engine.value}|{spec.probe.value}|n={n}|ratio={float(ratio)!r}|d={d}"
            results.append(runner.average(observable, tag, spec.realizations, key))
        logger.info(f"Finished N={n} ({len(spec.sigma_ratios)} points)")
    return results


def results_table(results: List[EnsembleResult]) -> pd.DataFrame:
    return pd.DataFrame([r.to_dict() for r in results])


@dataclass
class PeakResult:
    x_peak: float
    y_peak: float
    interior: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"x_peak": self.x_peak, "y_peak": self.y_peak, "interior": self.interior}


def locate_peak(x, y) -> PeakResult:
    """
    Maximum of a sampled curve, refined by the parabola through the top
    grid point and its neighbours. Endpoint maxima are returned unrefined.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != len(y) or len(x) == 0:
        raise ValueError("locate_peak needs equal-length nonempty arrays")
    i = int(np.nanargmax(y))
    if i == 0 or i == len(x) - 1:
        return PeakResult(float(x[i]), float(y[i]), interior=False)

    a, b, c = np.polyfit(x[i - 1 : i + 2], y[i - 1 : i + 2], 2)
    if a >= 0:
        return PeakResult(float(x[i]), float(y[i]), interior=True)
    vertex = float(np.clip(-b / (2 * a), x[i - 1], x[i + 1]))
    return PeakResult(vertex, float(np.polyval([a, b, c], vertex)), interior=True)


def peak_positions(table: pd.DataFrame, x: str = "sigma_ratio", y: str = "mean") -> pd.DataFrame:
    """One locate_peak row per system size"""
    rows = []
    for n, group in table.sort_values(x).groupby("n"):
        rows.append({"n": int(n), **locate_peak(group[x].to_numpy(), group[y].to_numpy()).to_dict()})
    return pd.DataFrame(rows)
