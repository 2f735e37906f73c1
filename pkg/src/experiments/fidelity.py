"""
Fidelity scaling of mitigated circuits

For each (N, d, setting) an ensemble of all-to-all circuits is replayed
four ways from one gate record; the per-realization quantities are the
mitigated fidelity F_M and the linear XEB variants. Fluctuations of
log F are then fitted to c d^beta.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd
from scipy.stats import linregress

from ..circuits.disorder import DisorderMode, DisorderSpec, MitigationSpec, sample_noise_field
from ..circuits.topology import build_all_to_all_schedule
from ..exact.benchmarks import xeb, xeb_circuit_averaged, xeb_mitigated
from ..exact.simulator import ExactSimulator, sample_gate_record
from ..errors import NonFiniteEnsembleError
from .ensemble import EnsembleRunner, summarize

logger = logging.getLogger("FidelityScaling")


@dataclass(frozen=True)
class FidelitySetting:
    """Disorder point and whether antinoise is applied"""
    label: str
    sigma_ratio: float
    mitigated: bool = True
    q_bar: float = 0.1
    p: float = 0.5

    def disorder(self) -> DisorderSpec:
        return DisorderSpec.from_sigma_ratio(self.sigma_ratio, self.q_bar, self.p, DisorderMode.SPACETIME)

    def mitigation(self) -> MitigationSpec:
        if not self.mitigated:
            return MitigationSpec.none()
        return MitigationSpec.zero_mean_field(self.disorder())


def _safe_log(value: float) -> float:
    return math.log(value) if value > 0 else math.nan


@dataclass(frozen=True)
class FidelityRealization:
    n: int
    depth: int
    setting: FidelitySetting

    def __call__(self, rng: np.random.Generator) -> Dict[str, float]:
        disorder = self.setting.disorder()
        mitigation = self.setting.mitigation()
        schedule = build_all_to_all_schedule(self.n, self.depth, rng)
        field = sample_noise_field(disorder, self.n, self.depth, rng)
        record = sample_gate_record(schedule, rng)

        simulator = ExactSimulator()
        dists = simulator.replay_distributions(record, field, mitigation)
        f_m = simulator.mitigated_fidelity(record, field, mitigation)
        f_xeb = xeb(dists["p_n"], dists["p_0"], self.n)
        f_xeb_m = xeb_mitigated(dists["p_n"], dists["p_a"], self.n)
        f_xeb_bar = xeb_circuit_averaged(dists["p_0"], dists["p_an"], self.n)
        return {
            "neg_log_F_M_per_n": -_safe_log(f_m) / self.n,
            "log_F_M": _safe_log(f_m),
            "F_XEB": f_xeb,
            "F_XEB_M": f_xeb_m,
            "neg_log_F_XEB_bar_per_n": -_safe_log(f_xeb_bar) / self.n,
            "log_F_XEB_bar": _safe_log(f_xeb_bar),
        }


def fidelity_scaling(
    sizes: Sequence[int],
    depths: Sequence[int],
    settings: Sequence[FidelitySetting],
    realizations: int,
    runner: EnsembleRunner,
) -> pd.DataFrame:
    """
    One row per (N, d, setting) with mean/std of each fidelity quantity.

    Column names are <quantity>_mean, <quantity>_std, <quantity>_non_finite.
    """
    rows = []
    for setting in settings:
        for n in sizes:
            for d in depths:
                tag = f"fidelity|{setting.label}|n={n}|d={d}"
                values = runner.collect(FidelityRealization(n, d, setting), tag, realizations)
                row: Dict[str, Any] = {"setting": setting.label, "n": n, "depth": d, "count": realizations}
                for name in values[0]:
                    try:
                        stats = summarize([v[name] for v in values])
                        row[f"{name}_mean"] = stats.mean
                        row[f"{name}_std"] = stats.std
                        row[f"{name}_non_finite"] = stats.non_finite_count
                    except NonFiniteEnsembleError:
                        row[f"{name}_mean"] = math.nan
                        row[f"{name}_std"] = math.nan
                        row[f"{name}_non_finite"] = realizations
                rows.append(row)
            logger.info(f"{setting.label}: finished N={n}")
    return pd.DataFrame(rows)


@dataclass
class FluctuationFit:
    setting: str
    n: int
    beta: float
    log_c: float
    r2: float

    def to_dict(self) -> Dict[str, Any]:
        return self.__dict__.copy()


def fit_fluctuation_exponent(
    table: pd.DataFrame, column: str = "log_F_M_std"
) -> List[FluctuationFit]:
    """Fit std(log F) = c d^beta on log-log axes per (setting, N)"""
    fits = []
    for (setting, n), group in table.groupby(["setting", "n"]):
        group = group[(group[column] > 0) & (group["depth"] > 0)]
        if len(group) < 2:
            continue
        fit = linregress(np.log(group["depth"].to_numpy(float)), np.log(group[column].to_numpy(float)))
        fits.append(
            FluctuationFit(
                setting=str(setting),
                n=int(n),
                beta=float(fit.slope),
                log_c=float(fit.intercept),
                r2=float(fit.rvalue**2),
            )
        )
    return fits
