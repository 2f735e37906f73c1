"""
Circuit Topology - Qubit layouts and two-qubit gate schedules

This module:
1. Describes the two supported layouts (periodic 1D chain, all-to-all)
2. Builds brickwork schedules on the ring
3. Builds random perfect-matching schedules on the complete graph
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

Pair = Tuple[int, int]
Layer = Tuple[Pair, ...]


class TopologyKind(Enum):
    """Connectivity of the qubit register"""
    CHAIN_1D_PERIODIC = "chain-1d-periodic"
    ALL_TO_ALL = "all-to-all"


@dataclass(frozen=True)
class Topology:
    """Layout of an N-qubit register"""
    kind: TopologyKind
    n_qubits: int

    def __post_init__(self):
        if self.n_qubits < 2 or self.n_qubits % 2 != 0:
            raise ValueError(
                f"Invalid n_qubits '{self.n_qubits}'. Must be even and >= 2"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "n_qubits": self.n_qubits}


@dataclass(frozen=True)
class GateSchedule:
    """
    Ordered list of layers, each a perfect matching of the sites.

    Pairs are ordered (first qubit, second qubit) as the gate sees them; the
    wrap-around pair of a brickwork layer is written (N-1, 0).
    """
    n_qubits: int
    layers: Tuple[Layer, ...]

    def __post_init__(self):
        for t, layer in enumerate(self.layers):
            seen = set()
            for i, j in layer:
                if i == j or not (0 <= i < self.n_qubits and 0 <= j < self.n_qubits):
                    raise ValueError(f"Invalid pair ({i}, {j}) in layer {t}")
                if i in seen or j in seen:
                    raise ValueError(f"Site reused within layer {t}: ({i}, {j})")
                seen.update((i, j))

    @property
    def depth(self) -> int:
        return len(self.layers)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_qubits": self.n_qubits,
            "layers": [[list(pair) for pair in layer] for layer in self.layers],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GateSchedule":
        return cls(
            n_qubits=int(data["n_qubits"]),
            layers=tuple(
                tuple((int(i), int(j)) for i, j in layer) for layer in data["layers"]
            ),
        )


def _check_register(n: int, d: int) -> None:
    if n < 2 or n % 2 != 0:
        raise ValueError(f"Invalid n '{n}'. Must be even and >= 2")
    if d < 0:
        raise ValueError(f"Invalid depth '{d}'. Must be >= 0")


def build_brickwork_schedule(n: int, d: int) -> GateSchedule:
    """
    Brickwork on a periodic chain.

    Even layers (t = 0, 2, ...) pair (2k, 2k+1); odd layers pair
    (2k+1, (2k+2) mod N). With N = 2 both layer types act on (0, 1).
    """
    _check_register(n, d)
    even: Layer = tuple((2 * k, 2 * k + 1) for k in range(n // 2))
    if n == 2:
        odd = even
    else:
        odd = tuple((2 * k + 1, (2 * k + 2) % n) for k in range(n // 2))
    return GateSchedule(n_qubits=n, layers=tuple(even if t % 2 == 0 else odd for t in range(d)))


def build_all_to_all_schedule(n: int, d: int, rng: np.random.Generator) -> GateSchedule:
    """Each layer is a uniform random perfect matching (shuffle, pair neighbours)."""
    _check_register(n, d)
    layers: List[Layer] = []
    for _ in range(d):
        perm = rng.permutation(n)
        pairs = sorted(
            (int(min(perm[2 * k], perm[2 * k + 1])), int(max(perm[2 * k], perm[2 * k + 1])))
            for k in range(n // 2)
        )
        layers.append(tuple(pairs))
    return GateSchedule(n_qubits=n, layers=tuple(layers))


def build_schedule(
    topology: Topology, d: int, rng: Optional[np.random.Generator] = None
) -> GateSchedule:
    """Dispatch on topology kind"""
    if topology.kind == TopologyKind.CHAIN_1D_PERIODIC:
        return build_brickwork_schedule(topology.n_qubits, d)
    if rng is None:
        raise ValueError("An rng is required for all-to-all schedules")
    return build_all_to_all_schedule(topology.n_qubits, d, rng)


def create_topology(kind: str, n_qubits: int) -> Topology:
    """Factory accepting the config spelling of the layout"""
    valid = [k.value for k in TopologyKind]
    if kind not in valid:
        raise ValueError(f"Invalid topology '{kind}'. Valid: {valid}")
    return Topology(kind=TopologyKind(kind), n_qubits=n_qubits)
