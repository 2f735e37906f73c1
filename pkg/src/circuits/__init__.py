"""Circuit model: topologies, gate schedules, disorder and antinoise calibration"""

from .topology import (
    GateSchedule,
    Topology,
    TopologyKind,
    build_all_to_all_schedule,
    build_brickwork_schedule,
    build_schedule,
    create_topology,
)
from .disorder import (
    DisorderMode,
    DisorderSpec,
    MitigationMode,
    MitigationSpec,
    NoiseField,
    create_mitigation,
    disorder_sigma,
    imry_ma_ratio,
    longest_low_noise_run,
    mean_noise_rate,
    sample_noise_field,
    zero_mean_field_rate,
)

__all__ = [
    "GateSchedule",
    "Topology",
    "TopologyKind",
    "build_all_to_all_schedule",
    "build_brickwork_schedule",
    "build_schedule",
    "create_topology",
    "DisorderMode",
    "DisorderSpec",
    "MitigationMode",
    "MitigationSpec",
    "NoiseField",
    "create_mitigation",
    "disorder_sigma",
    "imry_ma_ratio",
    "longest_low_noise_run",
    "mean_noise_rate",
    "sample_noise_field",
    "zero_mean_field_rate",
]
