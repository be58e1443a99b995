"""Node deployment, geometry and liveness bookkeeping for a static field."""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from enum import Enum


class NodeStatus(Enum):
    ALIVE = "alive"
    ENERGY_DEAD = "energy-dead"
    FAULT_DEAD = "fault-dead"


class NodeRole(Enum):
    NCH = "nch"
    PCH = "pch"
    BCH = "bch"


@dataclass
class FieldConfig:
    """Deployment area, base-station position and per-node battery."""

    width: float
    height: float
    bs_position: tuple[float, float]
    node_count: int
    initial_energy: float = 3.0

    def validate(self) -> None:
        if self.width <= 0:
            raise ValueError("field.width must be > 0")
        if self.height <= 0:
            raise ValueError("field.height must be > 0")
        bx, by = self.bs_position
        if not (0 <= bx <= self.width and 0 <= by <= self.height):
            raise ValueError("field.bs_position must lie inside the field")
        if self.node_count < 1:
            raise ValueError("field.node_count must be >= 1")
        if self.initial_energy <= 0:
            raise ValueError("field.initial_energy must be > 0")

    def max_bs_distance(self) -> float:
        """Largest possible node-to-BS distance (farthest field corner)."""
        bx, by = self.bs_position
        return max(
            math.dist((bx, by), corner)
            for corner in (
                (0.0, 0.0),
                (self.width, 0.0),
                (0.0, self.height),
                (self.width, self.height),
            )
        )


@dataclass
class Node:
    id: int
    position: tuple[float, float]
    residual_energy: float
    status: NodeStatus = NodeStatus.ALIVE
    role: NodeRole = NodeRole.NCH

    @property
    def alive(self) -> bool:
        return self.status is NodeStatus.ALIVE


def substream_seed(seed: int, name: str) -> int:
    """Portable derived seed for a named stream of a run."""
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def substream(seed: int, name: str) -> random.Random:
    """Deterministic Mersenne Twister stream derived from (seed, name)."""
    return random.Random(substream_seed(seed, name))


def deploy(cfg: FieldConfig, seed: int) -> list[Node]:
    """Uniformly scatter `node_count` nodes, all alive at full energy."""
    cfg.validate()
    rng = random.Random(seed)
    nodes = []
    for i in range(cfg.node_count):
        x = rng.uniform(0.0, cfg.width)
        y = rng.uniform(0.0, cfg.height)
        nodes.append(Node(id=i, position=(x, y), residual_energy=cfg.initial_energy))
    return nodes


def distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.dist(a, b)


def alive_count(nodes: list[Node]) -> int:
    return sum(1 for n in nodes if n.status is NodeStatus.ALIVE)


@dataclass
class Network:
    """One run's nodes plus cached node-to-BS distances."""

    cfg: FieldConfig
    nodes: list[Node]
    bs_distances: list[float] = field(default_factory=list)

    @classmethod
    def create(cls, cfg: FieldConfig, seed: int) -> "Network":
        nodes = deploy(cfg, seed)
        bs = cfg.bs_position
        return cls(cfg, nodes, [distance(n.position, bs) for n in nodes])

    def bs_distance(self, node_id: int) -> float:
        return self.bs_distances[node_id]

    def alive_nodes(self) -> list[Node]:
        return [n for n in self.nodes if n.status is NodeStatus.ALIVE]

    def alive_count(self) -> int:
        return alive_count(self.nodes)

    def total_residual(self) -> float:
        return sum(n.residual_energy for n in self.nodes)
