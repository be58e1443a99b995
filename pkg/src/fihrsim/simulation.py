"""Round loop: formation, fault injection, data phase, metric series."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .fuzzy import FuzzyConfig
from .metrics import (
    MeanRound,
    MeanSummary,
    Summary,
    average_runs,
    compute_fnd,
    compute_hna,
    throughput_kb,
)
from .network import FieldConfig, Network, NodeRole, NodeStatus, substream, substream_seed
from .protocols import (
    ClusterState,
    EnergyLedger,
    ProtocolConfig,
    dhr_data_phase,
    fihr_cluster_formation,
    probabilistic_cluster_formation,
    _informer_data_phase,
)
from .radio import RadioParams

PROTOCOLS = ("fihr", "ihr", "dhr")


@dataclass
class SimConfig:
    protocol: str
    rounds: int
    field: FieldConfig
    proto: ProtocolConfig
    radio: RadioParams
    fuzzy: FuzzyConfig
    fault_rate: float = 0.0
    seed: int = 1
    runs: int = 20

    def validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"simulation.protocol must be one of {PROTOCOLS}")
        if self.rounds < 1:
            raise ValueError("simulation.rounds must be >= 1")
        if not 0.0 <= self.fault_rate <= 1.0:
            raise ValueError("simulation.fault_rate must be in [0, 1]")
        if self.runs < 1:
            raise ValueError("simulation.runs must be >= 1")
        self.field.validate()
        self.proto.validate()


@dataclass
class RoundMetrics:
    round: int
    alive: int
    dead: int
    total_residual: float
    packets_cum: int
    failovers_cum: int


@dataclass
class RunResult:
    run_index: int
    seed: int
    initial_energy: float
    series: list[RoundMetrics]
    summary: Summary
    total_charged: float


@dataclass
class SimulationResult:
    protocol: str
    config: SimConfig
    runs: list[RunResult]
    mean_series: list[MeanRound]
    mean_summary: MeanSummary


def inject_faults(state: ClusterState, net: Network, fault_rate: float, rng) -> set[int]:
    """Permanently fault each current primary head with `fault_rate`."""
    failed: set[int] = set()
    if fault_rate <= 0.0:
        return failed
    for cluster in state.clusters:
        pch = net.nodes[cluster.pch_id]
        if pch.status is NodeStatus.ALIVE and rng.random() < fault_rate:
            pch.status = NodeStatus.FAULT_DEAD
            pch.role = NodeRole.NCH
            failed.add(pch.id)
    return failed


@dataclass
class RunState:
    """Mutable state of one simulation run."""

    net: Network
    election_rng: object
    fault_rng: object
    round_index: int = 0
    served: set[int] = field(default_factory=set)
    packets_cum: int = 0
    failovers_cum: int = 0
    total_charged: float = 0.0


def run_round(run: RunState, config: SimConfig) -> RoundMetrics:
    """One round: formation, fault injection, data phase, snapshot."""
    net = run.net
    round_number = run.round_index + 1
    if net.alive_count() > 0:
        ledger = EnergyLedger()
        epoch = math.ceil(1.0 / config.proto.t_probability)
        if run.round_index % epoch == 0:
            run.served.clear()
        if config.protocol == "fihr":
            state = fihr_cluster_formation(
                net,
                config.proto,
                config.fuzzy,
                config.radio,
                run.election_rng,
                ledger,
                round_index=run.round_index,
                served=run.served,
            )
        else:
            state = probabilistic_cluster_formation(
                net,
                config.proto,
                config.radio,
                run.election_rng,
                ledger,
                round_index=run.round_index,
                served=run.served,
            )
        inject_faults(state, net, config.fault_rate, run.fault_rng)
        if config.protocol == "dhr":
            events = dhr_data_phase(state, net, config.proto, config.radio, ledger)
        else:
            events = _informer_data_phase(state, net, config.proto, config.radio, ledger)
        run.packets_cum += events.packets_delivered
        run.failovers_cum += events.failovers
        run.total_charged += ledger.total()
    run.round_index += 1
    alive = net.alive_count()
    return RoundMetrics(
        round=round_number,
        alive=alive,
        dead=len(net.nodes) - alive,
        total_residual=net.total_residual(),
        packets_cum=run.packets_cum,
        failovers_cum=run.failovers_cum,
    )


def run_single(config: SimConfig, run_index: int) -> RunResult:
    """One seeded run over the full horizon; after network death the
    remaining rounds repeat the frozen final snapshot."""
    run_seed = config.seed + run_index
    net = Network.create(config.field, substream_seed(run_seed, "deploy"))
    run = RunState(
        net=net,
        election_rng=substream(run_seed, "election"),
        fault_rng=substream(run_seed, "fault"),
    )
    series: list[RoundMetrics] = []
    for _ in range(config.rounds):
        if net.alive_count() == 0:
            break
        series.append(run_round(run, config))
    while len(series) < config.rounds:
        series.append(
            RoundMetrics(
                round=len(series) + 1,
                alive=0,
                dead=len(net.nodes),
                total_residual=net.total_residual(),
                packets_cum=run.packets_cum,
                failovers_cum=run.failovers_cum,
            )
        )
    summary = Summary(
        fnd=compute_fnd(series),
        hna=compute_hna(series, config.field.node_count),
        throughput_kb=throughput_kb(run.packets_cum, config.proto.data_bits),
    )
    return RunResult(
        run_index=run_index,
        seed=run_seed,
        initial_energy=config.field.node_count * config.field.initial_energy,
        series=series,
        summary=summary,
        total_charged=run.total_charged,
    )


def run_simulation(config: SimConfig) -> SimulationResult:
    """All runs of one protocol with derived seeds seed, seed+1, ..."""
    config.validate()
    runs = [run_single(config, k) for k in range(config.runs)]
    mean_series, mean_summary = average_runs(runs)
    return SimulationResult(
        protocol=config.protocol,
        config=config,
        runs=runs,
        mean_series=mean_series,
        mean_summary=mean_summary,
    )
