"""Ensembles, sweeps, finite-size scaling and derived experiments"""

from .ensemble import (
    EnsembleResult,
    EnsembleRunner,
    RealizationStreams,
    disorder_average,
    summarize,
)
from .probes import Engine, ExactRealization, Probe, ReplicaRealization, probe_pair
from .sweep import PeakResult, SweepSpec, locate_peak, peak_positions, results_table, sweep
from .scaling import (
    CollapseResult,
    CollapseScan,
    CollapseSpec,
    CrossingResult,
    Curve,
    curves_from_table,
    find_crossing,
    scaling_collapse,
    scan_collapse,
)
from .instability import GrowthFit, fit_growth, instability_experiment
from .fidelity import (
    FidelityRealization,
    FidelitySetting,
    FluctuationFit,
    fidelity_scaling,
    fit_fluctuation_exponent,
)

__all__ = [
    "EnsembleResult",
    "EnsembleRunner",
    "RealizationStreams",
    "disorder_average",
    "summarize",
    "Engine",
    "ExactRealization",
    "Probe",
    "ReplicaRealization",
    "probe_pair",
    "PeakResult",
    "SweepSpec",
    "locate_peak",
    "peak_positions",
    "results_table",
    "sweep",
    "CollapseResult",
    "CollapseScan",
    "CollapseSpec",
    "CrossingResult",
    "Curve",
    "curves_from_table",
    "find_crossing",
    "scaling_collapse",
    "scan_collapse",
    "GrowthFit",
    "fit_growth",
    "instability_experiment",
    "FidelityRealization",
    "FidelitySetting",
    "FluctuationFit",
    "fidelity_scaling",
    "fit_fluctuation_exponent",
]
