"""Two-replica statistical-mechanics engine in the {I, S} configuration basis"""

from .state import (
    InitialForm,
    Region,
    ReplicaState,
    create_initial_state,
    init_haar_global,
    init_product_state,
    init_simple,
)
from .transitions import (
    apply_antinoise,
    apply_gate,
    apply_noise,
    apply_site_channel,
    channel_matrix,
    step_layer,
)
from .observables import (
    avg_purity,
    correlation_metric,
    log_sign_resolved_traces,
    renyi2_probe,
    s_sector_weight,
    sign_resolved_traces,
    trace,
)
from .engine import ReplicaEngine, create_replica_engine

__all__ = [
    "InitialForm",
    "Region",
    "ReplicaState",
    "create_initial_state",
    "init_haar_global",
    "init_product_state",
    "init_simple",
    "apply_antinoise",
    "apply_gate",
    "apply_noise",
    "apply_site_channel",
    "channel_matrix",
    "step_layer",
    "avg_purity",
    "correlation_metric",
    "log_sign_resolved_traces",
    "renyi2_probe",
    "s_sector_weight",
    "sign_resolved_traces",
    "trace",
    "ReplicaEngine",
    "create_replica_engine",
]
