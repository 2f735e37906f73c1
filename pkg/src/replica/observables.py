"""Trace and averaged-purity observables of a replica state"""

import math
from typing import Tuple

import numpy as np

from ..errors import SignedModeError
from .state import TRACE_I, TRACE_S, Region, ReplicaState, product_weights

_OUTSIDE = np.array([TRACE_I, TRACE_S])
_INSIDE = np.array([TRACE_S, TRACE_I])


def _trace_weights(n: int) -> np.ndarray:
    return product_weights([_OUTSIDE] * n)


def _region_weights(n: int, region: Region) -> np.ndarray:
    # swap trick: S on a region site pairs with the swap, I elsewhere with the identity
    return product_weights([_INSIDE if x in region else _OUTSIDE for x in range(n)])


def trace(state: ReplicaState) -> float:
    return float(state.weights @ _trace_weights(state.n))


def s_sector_weight(state: ReplicaState) -> float:
    """Trace carried by every configuration except all-I"""
    return trace(state) - float(state.weights[0]) * TRACE_I**state.n


def avg_purity(state: ReplicaState, region: Region) -> float:
    """Circuit-averaged Tr[rho_A^2]; the empty region returns the trace"""
    region.validate(state.n)
    return float(state.weights @ _region_weights(state.n, region))


def _neg_log2(value: float) -> float:
    if not math.isfinite(value) or value <= 0.0:
        return math.nan
    return -math.log2(value)


def correlation_metric(state: ReplicaState, a: int, b: int) -> float:
    """
    I_ab = -log2 P(a) - log2 P(b) + log2 P(ab).

    Returns NaN when a purity is non-positive (possible above the threshold).
    """
    if a == b:
        raise ValueError(f"Correlation metric needs distinct sites, got ({a}, {b})")
    s_a = _neg_log2(avg_purity(state, Region.of([a])))
    s_b = _neg_log2(avg_purity(state, Region.of([b])))
    s_ab = _neg_log2(avg_purity(state, Region.of([a, b])))
    return s_a + s_b - s_ab


def renyi2_probe(state: ReplicaState, site: int) -> float:
    """-log2 of the averaged single-site purity"""
    return _neg_log2(avg_purity(state, Region.of([site])))


def sign_resolved_traces(state: ReplicaState) -> Tuple[float, float]:
    """(Tr rho_2^+, Tr rho_2^-); each equals the trace norm of its part"""
    if not state.signed:
        raise SignedModeError("Sign-resolved traces need a state initialized in signed mode")
    weights = _trace_weights(state.n)
    return float(state.w_plus @ weights), float(state.w_minus @ weights)


def _log_or_minus_inf(value: float) -> float:
    return math.log(value) if value > 0.0 else -math.inf


def log_sign_resolved_traces(state: ReplicaState) -> Tuple[float, float, float]:
    """
    (log Tr rho_2^+, log Tr rho_2^-, relative split residual).

    The residual is |Tr+ - Tr- - Tr| divided by max(Tr+, |Tr|); Tr- == 0
    gives log Tr- == -inf.
    """
    plus, minus = sign_resolved_traces(state)
    total = trace(state)
    residual = abs(plus - minus - total) / max(plus, abs(total), 1e-300)
    return _log_or_minus_inf(plus), _log_or_minus_inf(minus), residual
