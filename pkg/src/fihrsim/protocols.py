"""Cluster formation and data phases for the FIHR, IHR and DHR protocols.

FIHR elects tentative heads with a fixed probability, sizes each head's
communication range with the fuzzy controller and accepts heads whose
range disks do not overlap.  IHR and DHR elect heads with the rotating
LEACH threshold.  The data phase is shared between FIHR and IHR
(backup heads monitor the primary and take over after missed inquiry
responses); DHR instead duplicates every data packet to both heads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .fuzzy import FuzzyConfig, compute_comr
from .network import Network, Node, NodeRole, NodeStatus, distance
from .radio import RadioParams, aggregation_energy, rx_energy, tx_energy


@dataclass
class ProtocolConfig:
    """Knobs shared by all three protocols.

    comr_threshold: candidates whose ComR exceeds this withdraw (FIHR).
    adv_radius:     advertisement radius for IHR/DHR head announcements.
    """

    comr_threshold: float
    adv_radius: float
    t_probability: float = 0.1
    failover_threshold: int = 3
    m_transmissions: int = 3
    data_bits: int = 32000
    ctrl_bits: int = 160

    def validate(self) -> None:
        if not 0.0 < self.t_probability <= 1.0:
            raise ValueError("protocol.t_probability must be in (0, 1]")
        if self.comr_threshold <= 0:
            raise ValueError("protocol.comr_threshold must be > 0")
        if self.adv_radius <= 0:
            raise ValueError("protocol.adv_radius must be > 0")
        if self.failover_threshold <= 0:
            raise ValueError("protocol.failover_threshold must be > 0")
        if self.m_transmissions < 1:
            raise ValueError("protocol.m_transmissions must be >= 1")
        if self.data_bits <= 0:
            raise ValueError("protocol.data_bits must be > 0")
        if self.ctrl_bits <= 0:
            raise ValueError("protocol.ctrl_bits must be > 0")


@dataclass
class Cluster:
    pch_id: int
    comr: float
    bch_id: int | None
    member_ids: list[int]


@dataclass
class ClusterState:
    """One round's cluster assignment.

    Every node alive at the end of formation is exactly one of: a PCH, a
    member of one cluster, or an orphan (only when no head was elected).
    """

    clusters: list[Cluster]
    orphan_ids: list[int]
    inquiry_counters: list[int]


@dataclass
class RoundEvents:
    packets_delivered: int
    failovers: int
    energy_spent: dict[int, float]


class EnergyLedger:
    """Applies energy costs to nodes and records what was charged.

    A node whose residual cannot cover a cost performs no action: its
    remaining energy is drained to zero and it dies, and only the drained
    amount is recorded so that charged totals match residual deltas.
    """

    def __init__(self) -> None:
        self.spent: dict[int, float] = {}

    def charge(self, node: Node, cost: float) -> bool:
        if node.status is not NodeStatus.ALIVE:
            return False
        if cost > node.residual_energy:
            self.spent[node.id] = self.spent.get(node.id, 0.0) + node.residual_energy
            node.residual_energy = 0.0
            node.status = NodeStatus.ENERGY_DEAD
            node.role = NodeRole.NCH
            return False
        node.residual_energy -= cost
        self.spent[node.id] = self.spent.get(node.id, 0.0) + cost
        return True

    def total(self) -> float:
        return sum(self.spent.values())


def leach_threshold(p: float, round_index: int, was_ch_this_epoch: bool) -> float:
    """Rotating election threshold; zero for nodes that already served."""
    if not 0.0 < p <= 1.0:
        raise ValueError("leach_threshold requires 0 < p <= 1")
    if was_ch_this_epoch:
        return 0.0
    epoch = math.ceil(1.0 / p)
    return p / (1.0 - p * (round_index % epoch))


def accept_noncompeting(candidates: list[tuple[Node, float]]) -> list[tuple[Node, float]]:
    """Greedy head acceptance in the given order.

    Candidate i is accepted iff for every already accepted head j its
    range fits outside j's claimed disk: comr_i <= d(i, j) - comr_j.
    """
    accepted: list[tuple[Node, float]] = []
    for node, comr in candidates:
        ok = True
        for other, other_comr in accepted:
            if comr > distance(node.position, other.position) - other_comr:
                ok = False
                break
        if ok:
            accepted.append((node, comr))
    return accepted


def _reset_roles(net: Network) -> None:
    for n in net.nodes:
        if n.status is NodeStatus.ALIVE:
            n.role = NodeRole.NCH


def _finish_formation(
    net: Network,
    cfg: ProtocolConfig,
    radio: RadioParams,
    ledger: EnergyLedger,
    heads: list[tuple[Node, float]],
) -> ClusterState:
    """Advertisement, joining and backup selection shared by all protocols."""
    ctrl_rx = rx_energy(radio, cfg.ctrl_bits)

    pchs: list[tuple[Node, float]] = []
    for node, radius in heads:
        if not ledger.charge(node, tx_energy(radio, cfg.ctrl_bits, radius)):
            continue
        node.role = NodeRole.PCH
        pchs.append((node, radius))
        for other in net.nodes:
            if other is node or other.status is not NodeStatus.ALIVE:
                continue
            if distance(other.position, node.position) <= radius:
                ledger.charge(other, ctrl_rx)

    if not pchs:
        return ClusterState([], [n.id for n in net.alive_nodes()], [])

    clusters = [Cluster(node.id, radius, None, []) for node, radius in pchs]

    for node in net.nodes:
        if node.status is not NodeStatus.ALIVE or node.role is NodeRole.PCH:
            continue
        best = min(
            range(len(pchs)),
            key=lambda i: (distance(node.position, pchs[i][0].position), pchs[i][0].id),
        )
        pch = pchs[best][0]
        if ledger.charge(node, tx_energy(radio, cfg.ctrl_bits, distance(node.position, pch.position))):
            clusters[best].member_ids.append(node.id)
            if pch.status is NodeStatus.ALIVE:
                ledger.charge(pch, ctrl_rx)

    for cluster in clusters:
        pch = net.nodes[cluster.pch_id]
        members = [net.nodes[i] for i in cluster.member_ids]
        alive_members = [m for m in members if m.status is NodeStatus.ALIVE]
        if pch.status is not NodeStatus.ALIVE or not alive_members:
            continue
        backup = max(alive_members, key=lambda m: (m.residual_energy, -m.id))
        if not ledger.charge(pch, tx_energy(radio, cfg.ctrl_bits, cluster.comr)):
            continue
        for m in alive_members:
            ledger.charge(m, ctrl_rx)
        if backup.status is NodeStatus.ALIVE:
            backup.role = NodeRole.BCH
            cluster.bch_id = backup.id

    return ClusterState(clusters, [], [0] * len(clusters))


def _claim_order(contenders: list[tuple[Node, float]]) -> list[tuple[Node, float]]:
    """Competition order: richest candidates claim first (ties by id)."""
    return sorted(contenders, key=lambda nc: (-nc[0].residual_energy, nc[0].id))


def fihr_cluster_formation(
    net: Network,
    cfg: ProtocolConfig,
    fuzzy_cfg: FuzzyConfig,
    radio: RadioParams,
    rng,
    ledger: EnergyLedger,
    round_index: int = 0,
    served: set[int] | None = None,
) -> ClusterState:
    """Fuzzy competitive formation.

    Tentative heads self-elect with the rotating threshold (a draw counts
    as the node's turn for this epoch), size their communication range
    with the fuzzy controller, withdraw above the configured ceiling,
    then compete richest-first: a candidate is accepted only when its
    range disk stays clear of every disk already claimed.
    """
    _reset_roles(net)
    if served is None:
        served = set()
    candidates = []
    for n in net.alive_nodes():
        threshold = leach_threshold(cfg.t_probability, round_index, n.id in served)
        if rng.random() < threshold:
            candidates.append(n)
    served.update(n.id for n in candidates)
    sized = [
        (n, compute_comr(n.residual_energy, net.bs_distance(n.id), fuzzy_cfg))
        for n in candidates
    ]
    contenders = [(n, c) for n, c in sized if c <= cfg.comr_threshold]
    accepted = accept_noncompeting(_claim_order(contenders))
    return _finish_formation(net, cfg, radio, ledger, accepted)


def probabilistic_cluster_formation(
    net: Network,
    cfg: ProtocolConfig,
    radio: RadioParams,
    rng,
    ledger: EnergyLedger,
    round_index: int = 0,
    served: set[int] | None = None,
) -> ClusterState:
    """LEACH-style self-election shared by IHR and DHR.

    `served` collects the ids that already headed a cluster this epoch;
    the caller clears it at epoch boundaries.
    """
    _reset_roles(net)
    if served is None:
        served = set()
    elected = []
    for n in net.alive_nodes():
        threshold = leach_threshold(cfg.t_probability, round_index, n.id in served)
        if rng.random() < threshold:
            elected.append(n)
    served.update(n.id for n in elected)
    return _finish_formation(
        net, cfg, radio, ledger, [(n, cfg.adv_radius) for n in elected]
    )


def ihr_cluster_formation(
    net, cfg, radio, rng, ledger, round_index: int = 0, served: set[int] | None = None
) -> ClusterState:
    return probabilistic_cluster_formation(
        net, cfg, radio, rng, ledger, round_index, served
    )


def dhr_cluster_formation(
    net, cfg, radio, rng, ledger, round_index: int = 0, served: set[int] | None = None
) -> ClusterState:
    return probabilistic_cluster_formation(
        net, cfg, radio, rng, ledger, round_index, served
    )


def _informer_data_phase(
    state: ClusterState,
    net: Network,
    cfg: ProtocolConfig,
    radio: RadioParams,
    ledger: EnergyLedger,
) -> RoundEvents:
    """Shared FIHR/IHR data phase with backup-head failover.

    Each cycle: the backup inquires its primary and counts unanswered
    inquiries; past the failover threshold it informs the members and
    becomes the acting head from that cycle on.  Members then send one
    data packet to the acting head, which aggregates (its own reading
    included) and uplinks one packet to the base station.
    """
    delivered = 0
    failovers = 0
    failed_over = [False] * len(state.clusters)
    bs = net.cfg.bs_position
    ctrl_rx = rx_energy(radio, cfg.ctrl_bits)
    data_rx = rx_energy(radio, cfg.data_bits)

    for _ in range(cfg.m_transmissions):
        for ci, cluster in enumerate(state.clusters):
            pch = net.nodes[cluster.pch_id]
            bch = net.nodes[cluster.bch_id] if cluster.bch_id is not None else None

            if bch is not None and not failed_over[ci] and bch.status is NodeStatus.ALIVE:
                d_bp = distance(bch.position, pch.position)
                if ledger.charge(bch, tx_energy(radio, cfg.ctrl_bits, d_bp)):
                    state.inquiry_counters[ci] += 1
                    if pch.status is NodeStatus.ALIVE and ledger.charge(pch, ctrl_rx):
                        if ledger.charge(pch, tx_energy(radio, cfg.ctrl_bits, d_bp)):
                            if ledger.charge(bch, ctrl_rx):
                                state.inquiry_counters[ci] -= 1
                if (
                    state.inquiry_counters[ci] > cfg.failover_threshold
                    and bch.status is NodeStatus.ALIVE
                ):
                    ledger.charge(bch, tx_energy(radio, cfg.ctrl_bits, cluster.comr))
                    for mid in cluster.member_ids:
                        m = net.nodes[mid]
                        if m is not bch and m.status is NodeStatus.ALIVE:
                            ledger.charge(m, ctrl_rx)
                    failed_over[ci] = True
                    failovers += 1

            head = bch if (failed_over[ci] and bch is not None) else pch
            received = 0
            for mid in cluster.member_ids:
                m = net.nodes[mid]
                if m is head or m.status is not NodeStatus.ALIVE:
                    continue
                # members cannot sense a failed head, so their send cost
                # is spent either way
                d = distance(m.position, head.position)
                if ledger.charge(m, tx_energy(radio, cfg.data_bits, d)):
                    if head.status is NodeStatus.ALIVE and ledger.charge(head, data_rx):
                        received += 1
            if head.status is NodeStatus.ALIVE:
                if ledger.charge(
                    head, aggregation_energy(radio, cfg.data_bits, received + 1)
                ):
                    d_bs = distance(head.position, bs)
                    if ledger.charge(head, tx_energy(radio, cfg.data_bits, d_bs)):
                        delivered += 1

        for oid in state.orphan_ids:
            orphan = net.nodes[oid]
            if orphan.status is NodeStatus.ALIVE:
                d_bs = distance(orphan.position, bs)
                if ledger.charge(orphan, tx_energy(radio, cfg.data_bits, d_bs)):
                    delivered += 1

    return RoundEvents(delivered, failovers, dict(ledger.spent))


def fihr_data_phase(state, net, cfg, radio, ledger) -> RoundEvents:
    return _informer_data_phase(state, net, cfg, radio, ledger)


def ihr_data_phase(state, net, cfg, radio, ledger) -> RoundEvents:
    return _informer_data_phase(state, net, cfg, radio, ledger)


def dhr_data_phase(
    state: ClusterState,
    net: Network,
    cfg: ProtocolConfig,
    radio: RadioParams,
    ledger: EnergyLedger,
) -> RoundEvents:
    """Dual-homed data phase: every member sends each packet to both
    heads, both heads aggregate and uplink, and a cluster scores one
    distinct packet per cycle when at least one head gets through."""
    delivered = 0
    bs = net.cfg.bs_position
    data_rx = rx_energy(radio, cfg.data_bits)

    for _ in range(cfg.m_transmissions):
        for cluster in state.clusters:
            pch = net.nodes[cluster.pch_id]
            bch = net.nodes[cluster.bch_id] if cluster.bch_id is not None else None
            heads = [pch] if bch is None else [pch, bch]
            received = [0] * len(heads)
            for mid in cluster.member_ids:
                m = net.nodes[mid]
                if m is bch or m.status is not NodeStatus.ALIVE:
                    continue
                for hi, head in enumerate(heads):
                    d = distance(m.position, head.position)
                    if ledger.charge(m, tx_energy(radio, cfg.data_bits, d)):
                        if head.status is NodeStatus.ALIVE and ledger.charge(head, data_rx):
                            received[hi] += 1
            any_through = False
            for hi, head in enumerate(heads):
                if head.status is not NodeStatus.ALIVE:
                    continue
                if ledger.charge(
                    head, aggregation_energy(radio, cfg.data_bits, received[hi] + 1)
                ):
                    d_bs = distance(head.position, bs)
                    if ledger.charge(head, tx_energy(radio, cfg.data_bits, d_bs)):
                        any_through = True
            if any_through:
                delivered += 1

        for oid in state.orphan_ids:
            orphan = net.nodes[oid]
            if orphan.status is NodeStatus.ALIVE:
                d_bs = distance(orphan.position, bs)
                if ledger.charge(orphan, tx_energy(radio, cfg.data_bits, d_bs)):
                    delivered += 1

    return RoundEvents(delivered, 0, dict(ledger.spent))


def default_protocol_config(
    field_cfg, comr_max: float | None = None, **overrides
) -> ProtocolConfig:
    """Defaults derived from the field geometry: the withdrawal threshold
    sits at 0.9 of the ComR scale and IHR/DHR advertise over half the
    field diagonal."""
    if comr_max is None:
        comr_max = 0.5 * field_cfg.max_bs_distance()
    diagonal = math.hypot(field_cfg.width, field_cfg.height)
    params = {
        "comr_threshold": 0.9 * comr_max,
        "adv_radius": 0.5 * diagonal,
    }
    params.update(overrides)
    return ProtocolConfig(**params)
