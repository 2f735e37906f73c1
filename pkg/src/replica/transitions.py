"""
Replica Transitions - Gate, noise and antinoise maps on {I, S} weights

Every map is trace preserving and acts in place on the state's vectors.
"""

from typing import Sequence, Tuple

import numpy as np

from .state import ReplicaState, site_view

# IS and SI flow to II and SS with this weight under a two-site Haar gate
GATE_MIX = 0.4


def channel_matrix(q: float, q_a: float) -> np.ndarray:
    """
    Transfer matrix of noise(q) followed by antinoise(q_a) on one site.

    Columns are the input (I, S); rows the output (I, S).
    """
    r = (1.0 - q) ** 2 / (1.0 - q_a) ** 2
    return np.array([[1.0, (1.0 - r) / 2.0], [0.0, r]])


def apply_gate(state: ReplicaState, pair: Tuple[int, int]) -> ReplicaState:
    i, j = pair
    if i == j:
        raise ValueError(f"Invalid gate pair ({i}, {j}). Sites must differ")
    for vector in state.vectors():
        v = site_view(vector, state.n, (i, j))
        mix = GATE_MIX * (v[0, 1] + v[1, 0])
        v[0, 0] += mix
        v[1, 1] += mix
        v[0, 1] = 0.0
        v[1, 0] = 0.0
    return state


def _site_map(state: ReplicaState, site: int, a: float, b: float) -> None:
    """S -> a I + b S with a >= 0 on every vector"""
    for vector in state.vectors():
        v = site_view(vector, state.n, (site,))
        v[0] += a * v[1]
        v[1] *= b


def apply_noise(state: ReplicaState, site: int, q: float) -> ReplicaState:
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"Invalid noise rate '{q}'. Must lie in [0, 1]")
    b = (1.0 - q) ** 2
    _site_map(state, site, (1.0 - b) / 2.0, b)
    return state


def apply_antinoise(state: ReplicaState, site: int, q_a: float) -> ReplicaState:
    """
    S -> ((1 - (1-q_a)^-2)/2) I + (1-q_a)^-2 S.

    The I coefficient is negative for q_a > 0. In signed mode that part of
    each S weight moves across the sign split: w_plus(S) feeds w_minus(I)
    and w_minus(S) feeds w_plus(I).
    """
    if not 0.0 <= q_a < 1.0:
        raise ValueError(f"Invalid antinoise rate '{q_a}'. Must lie in [0, 1)")
    if q_a == 0.0:
        return state
    b = (1.0 - q_a) ** -2
    a = (1.0 - b) / 2.0

    v = site_view(state.weights, state.n, (site,))
    v[0] += a * v[1]
    v[1] *= b

    if state.signed:
        plus = site_view(state.w_plus, state.n, (site,))
        minus = site_view(state.w_minus, state.n, (site,))
        plus_s = plus[1].copy()
        minus_s = minus[1].copy()
        plus[0] += -a * minus_s
        minus[0] += -a * plus_s
        plus[1] *= b
        minus[1] *= b
    return state


def apply_site_channel(state: ReplicaState, site: int, q: float, q_a: float) -> ReplicaState:
    """
    Noise(q) followed by antinoise(q_a) as one map: S -> ((1-r)/2) I + r S.

    Only sites with q < q_a have r > 1 and a negative I coefficient, so only
    those route weight across the sign split. At q == q_a the map is the
    identity and the split is left untouched.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"Invalid noise rate '{q}'. Must lie in [0, 1]")
    if not 0.0 <= q_a < 1.0:
        raise ValueError(f"Invalid antinoise rate '{q_a}'. Must lie in [0, 1)")
    if q == q_a:
        return state
    matrix = channel_matrix(q, q_a)
    a, b = matrix[0, 1], matrix[1, 1]

    v = site_view(state.weights, state.n, (site,))
    v[0] += a * v[1]
    v[1] *= b
    if state.signed:
        plus = site_view(state.w_plus, state.n, (site,))
        minus = site_view(state.w_minus, state.n, (site,))
        if a >= 0.0:
            for part in (plus, minus):
                part[0] += a * part[1]
                part[1] *= b
        else:
            plus_s = plus[1].copy()
            minus_s = minus[1].copy()
            plus[0] += -a * minus_s
            minus[0] += -a * plus_s
            plus[1] *= b
            minus[1] *= b
    return state


def step_layer(
    state: ReplicaState,
    layer: Sequence[Tuple[int, int]],
    rates: np.ndarray,
    q_a: float,
) -> ReplicaState:
    """Gates of one layer, then the noise-antinoise channel on every site"""
    if len(rates) != state.n:
        raise ValueError(f"Rate row of length {len(rates)} does not match n={state.n}")
    for pair in layer:
        apply_gate(state, pair)
    for x in range(state.n):
        apply_site_channel(state, x, float(rates[x]), q_a)
    return state
