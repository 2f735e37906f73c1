"""
Fixed points, linear stability and the mean-field threshold

1. Closed-form fixed points of the reduced (G_plus, G_minus) system
2. Analytic Jacobian and its eigenvalues
3. Bisection for the |Delta_1| at which the origin loses stability
4. Seeded perturbation probes of the origin
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.optimize import bisect

from .equations import MeanFieldParams, gpm_rhs, gpm_system
from .integrator import Trajectory, integrate

logger = logging.getLogger("MeanFieldSolver")


@dataclass
class FixedPoint:
    label: str
    g_plus: float
    g_minus: float
    eigenvalues: Optional[np.ndarray] = None
    stable: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        eig = [] if self.eigenvalues is None else list(self.eigenvalues)
        return {
            "label": self.label,
            "g_plus": self.g_plus,
            "g_minus": self.g_minus,
            "eig_max_real": float(max(e.real for e in eig)) if eig else None,
            "eig_min_real": float(min(e.real for e in eig)) if eig else None,
            "stable": self.stable,
        }


def jacobian(g_plus: float, g_minus: float, params: MeanFieldParams) -> np.ndarray:
    k = 4.0 * abs(params.delta1) / (2.0 * (1.0 - params.p))
    skew = 2.0 * params.p - 1.0
    J = params.J
    return np.array(
        [
            [-4.0 * J * (3.0 + 8.0 * g_plus) - k * skew, k],
            [-16.0 * J * g_minus + k, -4.0 * J * (3.0 + 4.0 * g_plus) - k * skew],
        ]
    )


def linear_stability(point: FixedPoint, params: MeanFieldParams) -> np.ndarray:
    """Jacobian eigenvalues at the point, sorted by descending real part"""
    eig = np.linalg.eigvals(jacobian(point.g_plus, point.g_minus, params))
    return eig[np.argsort(-eig.real)]


def fixed_points(params: MeanFieldParams) -> List[FixedPoint]:
    """
    Origin, the symmetric branch G- = G+ = -(3 - |Delta_1|/J)/4 and the
    antisymmetric branch G- = -G+ = (3 + Delta_2/J)/4, each with stability.
    """
    sym = -(3.0 - abs(params.delta1) / params.J) / 4.0
    anti = -(3.0 + params.delta2 / params.J) / 4.0
    points = [
        FixedPoint("origin", 0.0, 0.0),
        FixedPoint("symmetric", sym, sym),
        FixedPoint("antisymmetric", anti, -anti),
    ]
    for point in points:
        point.eigenvalues = linear_stability(point, params)
        point.stable = bool(point.eigenvalues[0].real < 0)
        residual = max(abs(v) for v in gpm_rhs(point.g_plus, point.g_minus, params))
        if residual > 1e-9:
            logger.warning(f"Fixed point '{point.label}' has residual {residual:.3g}")
    return points


def origin_growth_rate(params: MeanFieldParams) -> float:
    return float(linear_stability(FixedPoint("origin", 0.0, 0.0), params)[0].real)


def stability_threshold(
    J: float,
    p: float = 0.5,
    gamma_bar: Optional[float] = None,
    upper: Optional[float] = None,
    xtol: float = 1e-12,
) -> float:
    """|Delta_1| where the largest origin eigenvalue crosses zero"""
    if J <= 0:
        raise ValueError(f"Invalid J '{J}'. Must be > 0")
    upper = upper if upper is not None else 10.0 * J

    def growth(delta1_abs: float) -> float:
        g = None if gamma_bar is None else max(gamma_bar, delta1_abs)
        return origin_growth_rate(MeanFieldParams.from_disorder(J, delta1_abs, p, g))

    threshold = float(bisect(growth, 0.0, upper, xtol=xtol * max(J, 1.0)))
    logger.info(f"Mean-field threshold at J={J}, p={p}: |Delta_1| = {threshold:.9g}")
    return threshold


def probe_stability(
    params: MeanFieldParams,
    t_end: float,
    seed: int,
    dt: Optional[float] = None,
    amplitude: float = 1e-4,
) -> Trajectory:
    """Integrate the reduced system from a seeded random kick off the origin"""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    y0 = rng.uniform(-amplitude, amplitude, size=2)
    dt = dt if dt is not None else 1e-3 / params.J
    trajectory = integrate(gpm_system(params), y0, t_end, dt, estimate_error=False)
    logger.debug(
        f"Probe |Delta_1|={abs(params.delta1):.4g}: diverged={trajectory.diverged}, "
        f"final={trajectory.final}"
    )
    return trajectory
