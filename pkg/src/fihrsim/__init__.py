"""Round-based WSN simulator for the FIHR, IHR and DHR clustering
protocols with a Mamdani fuzzy communication-range controller."""

from .fuzzy import (
    AggregatedOutput,
    FuzzyConfig,
    FuzzyVariable,
    LeftShoulder,
    RightShoulder,
    RuleBase,
    Triangular,
    compute_comr,
    default_fuzzy_config,
    defuzzify_coa,
    eval_membership,
    fuzzify,
    infer,
)
from .metrics import (
    MeanSummary,
    Summary,
    average_runs,
    compute_fnd,
    compute_hna,
    emit_csv,
    emit_summary_csv,
    throughput_kb,
)
from .network import (
    FieldConfig,
    Network,
    Node,
    NodeRole,
    NodeStatus,
    alive_count,
    deploy,
    distance,
)
from .protocols import (
    Cluster,
    ClusterState,
    EnergyLedger,
    ProtocolConfig,
    RoundEvents,
    default_protocol_config,
    dhr_cluster_formation,
    dhr_data_phase,
    fihr_cluster_formation,
    fihr_data_phase,
    ihr_cluster_formation,
    ihr_data_phase,
    leach_threshold,
)
from .radio import (
    RadioParams,
    aggregation_energy,
    crossover_distance,
    rx_energy,
    tx_energy,
)
from .simulation import (
    RoundMetrics,
    RunResult,
    SimConfig,
    SimulationResult,
    inject_faults,
    run_round,
    run_simulation,
)

__version__ = "0.1.0"
