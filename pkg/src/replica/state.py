"""
Replica State - Circuit-averaged two-copy state in the {I, S} basis

Configuration c is stored at integer index sum_x c_x 2^(N-1-x) (bit 1 = S),
so reshaping the weight vector to (2,) * N puts site x on axis x.
"""

from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Any, Dict, FrozenSet, Iterable, Optional, Sequence

import numpy as np

# Tr[I] and Tr[S] on one site of the doubled Hilbert space
TRACE_I = 4.0
TRACE_S = 2.0


class InitialForm(Enum):
    """Form of the simple initial condition on the region"""
    HAAR_ON_A = "haar-on-A"
    PRODUCT_ON_A = "product-on-A"


@dataclass(frozen=True)
class Region:
    """Subset of sites"""
    sites: FrozenSet[int]

    @classmethod
    def of(cls, sites: Iterable[int]) -> "Region":
        return cls(sites=frozenset(int(x) for x in sites))

    def validate(self, n: int) -> None:
        bad = [x for x in self.sites if not 0 <= x < n]
        if bad:
            raise ValueError(f"Invalid region sites {sorted(bad)} for n={n}")

    def __len__(self) -> int:
        return len(self.sites)

    def __contains__(self, site: int) -> bool:
        return site in self.sites


class ReplicaState:
    """
    Weight vector over {I, S}^N with optional sign resolution.

    In signed mode weights == w_plus - w_minus is maintained by every
    transition, with both parts nonnegative.
    """

    def __init__(
        self,
        n: int,
        weights: np.ndarray,
        w_plus: Optional[np.ndarray] = None,
        w_minus: Optional[np.ndarray] = None,
    ):
        if n < 1:
            raise ValueError(f"Invalid n '{n}'. Must be >= 1")
        if weights.shape != (2**n,):
            raise ValueError(f"Weight vector shape {weights.shape} does not match n={n}")
        if (w_plus is None) != (w_minus is None):
            raise ValueError("Signed mode needs both w_plus and w_minus")
        self.n = n
        self.weights = np.ascontiguousarray(weights, dtype=np.float64)
        self.w_plus = None if w_plus is None else np.ascontiguousarray(w_plus, dtype=np.float64)
        self.w_minus = None if w_minus is None else np.ascontiguousarray(w_minus, dtype=np.float64)

    @property
    def signed(self) -> bool:
        return self.w_plus is not None

    def vectors(self) -> Sequence[np.ndarray]:
        """Every vector a transition must update"""
        if self.signed:
            return (self.weights, self.w_plus, self.w_minus)
        return (self.weights,)

    def copy(self) -> "ReplicaState":
        return ReplicaState(
            self.n,
            self.weights.copy(),
            None if self.w_plus is None else self.w_plus.copy(),
            None if self.w_minus is None else self.w_minus.copy(),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "signed": self.signed, "weights": self.weights.tolist()}


def site_view(vector: np.ndarray, n: int, sites: Sequence[int]) -> np.ndarray:
    """Writable view of the weight vector with the given sites moved to the leading axes"""
    for x in sites:
        if not 0 <= x < n:
            raise ValueError(f"Invalid site '{x}' for n={n}")
    tensor = vector.reshape((2,) * n)
    return np.moveaxis(tensor, list(sites), list(range(len(sites))))


def product_weights(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of per-site 2-vectors (site 0 most significant)"""
    return reduce(np.kron, factors, np.ones(1))


def _build(n: int, weights: np.ndarray, signed: bool) -> ReplicaState:
    if not signed:
        return ReplicaState(n, weights)
    # initial weights are nonnegative
    return ReplicaState(n, weights, weights.copy(), np.zeros_like(weights))


def init_haar_global(n: int, signed: bool = False) -> ReplicaState:
    """Global Haar random state: alpha (I^N + S^N)"""
    if n < 1:
        raise ValueError(f"Invalid n '{n}'. Must be >= 1")
    alpha = 1.0 / (2.0**n * (2.0**n + 1.0))
    weights = np.zeros(2**n)
    weights[0] = alpha
    weights[-1] = alpha
    return _build(n, weights, signed)


def init_product_state(n: int, signed: bool = False) -> ReplicaState:
    """Random product state: (I + S)/6 on every site"""
    if n < 1:
        raise ValueError(f"Invalid n '{n}'. Must be >= 1")
    return _build(n, np.full(2**n, 6.0**-n), signed)


def init_simple(
    n: int,
    region: Region,
    form: InitialForm = InitialForm.PRODUCT_ON_A,
    signed: bool = False,
) -> ReplicaState:
    """Maximally mixed outside the region, Haar or random-product inside it."""
    if len(region) == 0:
        raise ValueError("Simple initial condition needs a nonempty region")
    region.validate(n)

    mixed = np.array([1.0 / TRACE_I, 0.0])
    if form == InitialForm.PRODUCT_ON_A:
        per_site = np.array([1.0 / 6.0, 1.0 / 6.0])
        weights = product_weights([per_site if x in region else mixed for x in range(n)])
    else:
        k = len(region)
        alpha = 1.0 / (2.0**k * (2.0**k + 1.0))
        all_i = product_weights([np.array([1.0, 0.0]) if x in region else mixed for x in range(n)])
        all_s = product_weights([np.array([0.0, 1.0]) if x in region else mixed for x in range(n)])
        weights = alpha * (all_i + all_s)
    return _build(n, weights, signed)


def create_initial_state(kind: str, n: int, region: Optional[Region] = None, signed: bool = False) -> ReplicaState:
    """Factory over the initial-state names used in configs"""
    if kind == "haar-global":
        return init_haar_global(n, signed)
    if kind == "product":
        return init_product_state(n, signed)
    valid_forms = [f.value for f in InitialForm]
    if kind in valid_forms:
        if region is None:
            raise ValueError(f"Initial state '{kind}' requires a region")
        return init_simple(n, region, InitialForm(kind), signed)
    valid = ["haar-global", "product"] + valid_forms
    raise ValueError(f"Invalid initial state '{kind}'. Valid: {valid}")
