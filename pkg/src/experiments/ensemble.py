"""
Ensemble Runner - Disorder/circuit averages over independent realizations

Every realization draws from its own Philox stream keyed by
(master seed, tag, realization id), so results do not depend on the worker
count or on completion order.
"""

import logging
import math
import zlib
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from ..errors import NonFiniteEnsembleError

Value = Union[float, Mapping[str, float]]
Observable = Callable[[np.random.Generator], Value]


class RealizationStreams:
    """RNG factory for one experiment"""

    def __init__(self, master_seed: int):
        self.master_seed = int(master_seed)

    @staticmethod
    def tag_id(tag: str) -> int:
        return zlib.crc32(tag.encode("utf-8"))

    def stream(self, tag: str, realization_id: int) -> np.random.Generator:
        seq = np.random.SeedSequence([self.master_seed, self.tag_id(tag), int(realization_id)])
        return np.random.Generator(np.random.Philox(seq))


@dataclass
class EnsembleResult:
    """Aggregate of one observable at one point"""
    key: Dict[str, Any]
    mean: float
    std: float
    stderr: float
    count: int
    non_finite_count: int = 0

    def to_dict(self) -> Dict[str, Any]:
        row = dict(self.key)
        row.update(
            {
                "mean": self.mean,
                "std": self.std,
                "stderr": self.stderr,
                "count": self.count,
                "non_finite_count": self.non_finite_count,
            }
        )
        return row


def summarize(values: Sequence[float], key: Optional[Dict[str, Any]] = None) -> EnsembleResult:
    """
    Mean, sample standard deviation and standard error of the finite values.

    Non-finite values are counted, never averaged. Sums use math.fsum.
    """
    finite = [float(v) for v in values if math.isfinite(v)]
    non_finite = len(values) - len(finite)
    if not finite:
        raise NonFiniteEnsembleError(f"All {len(values)} realizations were non-finite at {key}")
    count = len(finite)
    mean = math.fsum(finite) / count
    std = math.sqrt(math.fsum((v - mean) ** 2 for v in finite) / (count - 1)) if count > 1 else 0.0
    return EnsembleResult(
        key=dict(key or {}),
        mean=mean,
        std=std,
        stderr=std / math.sqrt(count),
        count=count,
        non_finite_count=non_finite,
    )


def _run_realization(observable: Observable, master_seed: int, tag: str, realization_id: int) -> Value:
    return observable(RealizationStreams(master_seed).stream(tag, realization_id))


class EnsembleRunner:
    """
    Fans realizations out over a process pool.

    workers == 1 runs inline in the coordinating process. Observables must
    be picklable (module-level classes or functions).
    """

    def __init__(self, master_seed: int, workers: int = 1):
        if workers < 1:
            raise ValueError(f"Invalid workers '{workers}'. Must be >= 1")
        self.master_seed = int(master_seed)
        self.workers = workers
        self.logger = logging.getLogger("EnsembleRunner")

    def collect(self, observable: Observable, tag: str, realizations: int) -> List[Value]:
        """Values ordered by realization id"""
        if realizations < 1:
            raise ValueError(f"Invalid realizations '{realizations}'. Must be >= 1")

        if self.workers == 1:
            return [
                _run_realization(observable, self.master_seed, tag, rid)
                for rid in range(realizations)
            ]

        results: Dict[int, Value] = {}
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            futures = {
                executor.submit(_run_realization, observable, self.master_seed, tag, rid): rid
                for rid in range(realizations)
            }
            for future in as_completed(futures):
                results[futures[future]] = future.result()
        return [results[rid] for rid in range(realizations)]

    def average(
        self,
        observable: Observable,
        tag: str,
        realizations: int,
        key: Optional[Dict[str, Any]] = None,
    ) -> EnsembleResult:
        result = summarize(self.collect(observable, tag, realizations), key)
        self.logger.info(
            f"{tag}: mean={result.mean:.6g} stderr={result.stderr:.3g} "
            f"count={result.count} non_finite={result.non_finite_count}"
        )
        return result


def disorder_average(
    observable: Observable,
    realizations: int,
    master_seed: int,
    key: Optional[Dict[str, Any]] = None,
    workers: int = 1,
    tag: Optional[str] = None,
) -> EnsembleResult:
    """Average an observable over independent seeded realizations"""
    key = dict(key or {})
    tag = tag or "|".join(f"{k}={v!r}" for k, v in sorted(key.items()))
    return EnsembleRunner(master_seed, workers).average(observable, tag, realizations, key)
