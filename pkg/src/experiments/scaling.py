"""
Finite-size scaling: crossings and data collapse

1. find_crossing: pairwise sign changes of y_b - y_a, median over size pairs
2. scaling_collapse: x -> (x - sigma_c) N^mu (optionally y -> y N^-zeta)
   with a quality score from interpolation onto a shared grid
3. scan_collapse: quality surface over (sigma_c, mu)
"""

import itertools
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

COLLAPSE_GRID_POINTS = 64


@dataclass
class Curve:
    """Probe values of one system size along the sigma/q_bar axis"""
    n: int
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        order = np.argsort(self.x)
        self.x, self.y = self.x[order], self.y[order]


def curves_from_table(
    table: pd.DataFrame, x: str = "sigma_ratio", y: str = "mean", group: str = "n"
) -> List[Curve]:
    return [
        Curve(n=int(n), x=g[x].to_numpy(), y=g[y].to_numpy())
        for n, g in table.groupby(group)
    ]


@dataclass
class CrossingResult:
    found: bool
    estimate: float
    uncertainty: float
    pairwise: List[Dict[str, Any]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "found": self.found,
            "estimate": self.estimate,
            "uncertainty": self.uncertainty,
            "pairwise": self.pairwise,
        }


def _first_crossing(x: np.ndarray, diff: np.ndarray) -> Optional[float]:
    for k in range(len(x)):
        if not math.isfinite(diff[k]):
            continue
        if diff[k] == 0.0:
            return float(x[k])
        if k + 1 < len(x) and math.isfinite(diff[k + 1]) and diff[k] * diff[k + 1] < 0:
            # linear interpolation between the bracketing grid points
            return float(x[k] - diff[k] * (x[k + 1] - x[k]) / (diff[k + 1] - diff[k]))
    return None


def find_crossing(curves: Sequence[Curve]) -> CrossingResult:
    """
    Crossing estimate from every pair of sizes.

    Curves are compared on the first curve's grid restricted to the common
    range. The estimate is the median of the pairwise crossings and the
    uncertainty half their spread.
    """
    if len(curves) < 2:
        raise ValueError("find_crossing needs at least two system sizes")
    pairwise = []
    for a, b in itertools.combinations(sorted(curves, key=lambda c: c.n), 2):
        lo, hi = max(a.x[0], b.x[0]), min(a.x[-1], b.x[-1])
        grid = np.array([v for v in a.x if lo <= v <= hi])
        if len(grid) < 2:
            continue
        diff = np.interp(grid, b.x, b.y) - np.interp(grid, a.x, a.y)
        crossing = _first_crossing(grid, diff)
        if crossing is not None:
            pairwise.append({"n_a": a.n, "n_b": b.n, "crossing": crossing})

    if not pairwise:
        return CrossingResult(found=False, estimate=math.nan, uncertainty=math.nan, pairwise=[])
    values = np.array([p["crossing"] for p in pairwise])
    return CrossingResult(
        found=True,
        estimate=float(np.median(values)),
        uncertainty=float(0.5 * (values.max() - values.min())),
        pairwise=pairwise,
    )


@dataclass(frozen=True)
class CollapseSpec:
    sigma_c: float
    mu: float
    y_exponent: Optional[float] = None  # off by default; the y-scaling is an ansatz

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError(f"Invalid mu '{self.mu}'. Must be > 0")


@dataclass
class CollapseResult:
    table: pd.DataFrame
    quality: float


def _rescale(curve: Curve, spec: CollapseSpec):
    x = (curve.x - spec.sigma_c) * curve.n**spec.mu
    y = curve.y * curve.n ** (-spec.y_exponent) if spec.y_exponent else curve.y
    return x, y


def scaling_collapse(curves: Sequence[Curve], spec: CollapseSpec) -> CollapseResult:
    """
    Rescale every curve and score how well they overlap.

    The score is the squared deviation from the mean curve, summed over
    curves and averaged over a shared grid on the common x range. No
    overlap scores infinity.
    """
    scaled = [(c.n, *_rescale(c, spec)) for c in curves]
    table = pd.DataFrame(
        [
            {"n": n, "x_scaled": float(xv), "y_scaled": float(yv)}
            for n, xs, ys in scaled
            for xv, yv in zip(xs, ys)
        ]
    )
    lo = max(xs[0] for _, xs, _ in scaled)
    hi = min(xs[-1] for _, xs, _ in scaled)
    if len(scaled) < 2 or not hi > lo:
        return CollapseResult(table=table, quality=math.inf)

    grid = np.linspace(lo, hi, COLLAPSE_GRID_POINTS)
    stack = np.array([np.interp(grid, xs, ys) for _, xs, ys in scaled])
    quality = float(np.mean(np.sum((stack - stack.mean(axis=0)) ** 2, axis=0)))
    return CollapseResult(table=table, quality=quality)


@dataclass
class CollapseScan:
    sigma_grid: np.ndarray
    mu_grid: np.ndarray
    quality: np.ndarray  # shape (len(sigma_grid), len(mu_grid))
    best_sigma_c: float
    best_mu: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"sigma_c": float(s), "mu": float(m), "quality": float(self.quality[i, j])}
                for i, s in enumerate(self.sigma_grid)
                for j, m in enumerate(self.mu_grid)
            ]
        )


def scan_collapse(
    curves: Sequence[Curve],
    sigma_grid: Sequence[float],
    mu_grid: Sequence[float],
    y_exponent: Optional[float] = None,
) -> CollapseScan:
    sigma_grid = np.asarray(sigma_grid, dtype=float)
    mu_grid = np.asarray(mu_grid, dtype=float)
    quality = np.array(
        [
            [scaling_collapse(curves, CollapseSpec(s, m, y_exponent)).quality for m in mu_grid]
            for s in sigma_grid
        ]
    )
    i, j = np.unravel_index(int(np.argmin(quality)), quality.shape)
    return CollapseScan(
        sigma_grid=sigma_grid,
        mu_grid=mu_grid,
        quality=quality,
        best_sigma_c=float(sigma_grid[i]),
        best_mu=float(mu_grid[j]),
    )
