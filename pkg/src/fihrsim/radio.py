"""First-order radio energy model.

Transmission energy has an electronics part plus an amplifier part that
switches from free-space (d^2) to multipath (d^4) at the crossover
distance d0 = sqrt(eps_fs / eps_mp).  Reception and aggregation cost
only electronics energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class RadioParams:
    """Radio constants.

    e_elec: electronics energy, J/bit (tx and rx)
    eps_fs: free-space amplifier energy, J/bit/m^2
    eps_mp: multipath amplifier energy, J/bit/m^4
    e_da:   aggregation energy, J/bit/signal
    """

    e_elec: float = 50e-9
    eps_fs: float = 10e-12
    eps_mp: float = 0.004e-12
    e_da: float = 5e-9

    def __post_init__(self) -> None:
        for name in ("e_elec", "eps_fs", "eps_mp", "e_da"):
            if getattr(self, name) <= 0:
                raise ValueError(f"radio.{name} must be > 0")
        if self.eps_fs <= self.eps_mp:
            raise ValueError("radio.eps_fs must exceed radio.eps_mp")


def crossover_distance(p: RadioParams) -> float:
    """Distance in meters where the two amplifier regimes meet."""
    return math.sqrt(p.eps_fs / p.eps_mp)


def tx_energy(p: RadioParams, bits: int, d: float) -> float:
    """Energy in joules to transmit `bits` over distance `d` meters."""
    if bits <= 0:
        raise ValueError("tx_energy requires bits > 0")
    if d < 0:
        raise ValueError("tx_energy requires d >= 0")
    if d < crossover_distance(p):
        return p.e_elec * bits + p.eps_fs * bits * d * d
    return p.e_elec * bits + p.eps_mp * bits * d ** 4


def rx_energy(p: RadioParams, bits: int) -> float:
    """Energy in joules to receive `bits`."""
    if bits <= 0:
        raise ValueError("rx_energy requires bits > 0")
    return p.e_elec * bits


def aggregation_energy(p: RadioParams, bits: int, signals: int) -> float:
    """Energy in joules to aggregate `signals` readings of `bits` each."""
    if bits <= 0:
        raise ValueError("aggregation_energy requires bits > 0")
    if signals < 1:
        raise ValueError("aggregation_energy requires signals >= 1")
    return p.e_da * bits * signals
