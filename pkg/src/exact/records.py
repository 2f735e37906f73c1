"""
Gate Records - The sampled unitaries of one circuit realization

A record lets the same circuit be replayed with different channels
(noiseless, noise only, antinoise only, both).
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np

from ..circuits.topology import GateSchedule
from ..utils.io import atomic_write_text


@dataclass
class GateApplication:
    pair: Tuple[int, int]
    unitary: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        flat = np.asarray(self.unitary, dtype=complex).reshape(16)
        return {
            "pair": list(self.pair),
            "unitary": [[float(z.real), float(z.imag)] for z in flat],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GateApplication":
        values = np.array([complex(re, im) for re, im in data["unitary"]])
        if values.shape != (16,):
            raise ValueError(f"Gate unitary needs 16 coefficients, got {len(values)}")
        return cls(pair=(int(data["pair"][0]), int(data["pair"][1])), unitary=values.reshape(4, 4))


@dataclass
class GateRecord:
    """Layers of (pair, unitary) applications"""
    n_qubits: int
    layers: List[List[GateApplication]] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def schedule(self) -> GateSchedule:
        return GateSchedule(
            n_qubits=self.n_qubits,
            layers=tuple(tuple(g.pair for g in layer) for layer in self.layers),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_qubits": self.n_qubits,
            "layers": [[g.to_dict() for g in layer] for layer in self.layers],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GateRecord":
        return cls(
            n_qubits=int(data["n_qubits"]),
            layers=[[GateApplication.from_dict(g) for g in layer] for layer in data["layers"]],
        )


def save_gate_record(record: GateRecord, path: Path) -> Path:
    path = Path(path)
    atomic_write_text(path, json.dumps(record.to_dict(), indent=2))
    return path


def load_gate_record(path: Path) -> GateRecord:
    with open(path) as f:
        return GateRecord.from_dict(json.load(f))
