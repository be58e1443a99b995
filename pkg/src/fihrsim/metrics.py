"""Lifetime metrics, run averaging and CSV serialization."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence


@dataclass(frozen=True)
class Summary:
    """Per-run lifetime summary; fnd/hna are None when never reached."""

    fnd: Optional[int]
    hna: Optional[int]
    throughput_kb: float


@dataclass(frozen=True)
class MeanSummary:
    """Cross-run means; fnd/hna averaged over the runs where defined."""

    fnd: Optional[float]
    fnd_defined: int
    hna: Optional[float]
    hna_defined: int
    throughput_kb: float


@dataclass(frozen=True)
class MeanRound:
    round: int
    alive: float
    dead: float
    total_residual: float
    packets_cum: float
    failovers_cum: float


def compute_fnd(series) -> Optional[int]:
    """Round of the first node death, or None if nothing died."""
    for m in series:
        if m.dead >= 1:
            return m.round
    return None


def compute_hna(series, node_count: int) -> Optional[int]:
    """First round where alive nodes drop to half the population."""
    for m in series:
        if m.alive <= node_count / 2:
            return m.round
    return None


def throughput_kb(packets: int, data_bits: int) -> float:
    """Delivered volume in KB (1 KB = 1000 bytes)."""
    if data_bits <= 0:
        raise ValueError("throughput_kb requires data_bits > 0")
    return packets * data_bits / 8 / 1000


def average_runs(runs) -> tuple[list[MeanRound], MeanSummary]:
    """Arithmetic per-round and per-summary mean over equal-length runs."""
    if not runs:
        raise ValueError("average_runs requires at least one run")
    horizon = len(runs[0].series)
    for r in runs:
        if len(r.series) != horizon:
            raise ValueError("average_runs requires equal round horizons")
    count = len(runs)
    mean_series = []
    for i in range(horizon):
        rows = [r.series[i] for r in runs]
        mean_series.append(
            MeanRound(
                round=rows[0].round,
                alive=sum(m.alive for m in rows) / count,
                dead=sum(m.dead for m in rows) / count,
                total_residual=sum(m.total_residual for m in rows) / count,
                packets_cum=sum(m.packets_cum for m in rows) / count,
                failovers_cum=sum(m.failovers_cum for m in rows) / count,
            )
        )
    fnd_values = [r.summary.fnd for r in runs if r.summary.fnd is not None]
    hna_values = [r.summary.hna for r in runs if r.summary.hna is not None]
    mean_summary = MeanSummary(
        fnd=sum(fnd_values) / len(fnd_values) if fnd_values else None,
        fnd_defined=len(fnd_values),
        hna=sum(hna_values) / len(hna_values) if hna_values else None,
        hna_defined=len(hna_values),
        throughput_kb=sum(r.summary.throughput_kb for r in runs) / count,
    )
    return mean_series, mean_summary


CSV_HEADER = "round,alive,dead,total_residual_j,packets_cum_kb,failovers_cum"


def _fmt(value) -> str:
    if isinstance(value, bool):
        raise TypeError("unexpected bool in CSV field")
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def emit_csv(series, path, data_bits: int) -> None:
    """Write one series file: header plus one row per round.

    Numbers use the shortest round-tripping decimal form, so identical
    input always produces byte-identical files.
    """
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(CSV_HEADER + "\n")
            for m in series:
                kb = throughput_kb(m.packets_cum, data_bits)
                row = (
                    _fmt(m.round),
                    _fmt(m.alive),
                    _fmt(m.dead),
                    _fmt(m.total_residual),
                    _fmt(kb),
                    _fmt(m.failovers_cum),
                )
                fh.write(",".join(row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write series CSV {path}: {exc}") from exc


def emit_summary_csv(rows: Sequence[tuple], path) -> None:
    """Write the run summary table: protocol,run,fnd,hna,throughput_kb.

    None entries serialize as empty fields.
    """
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            fh.write("protocol,run,fnd,hna,throughput_kb\n")
            for protocol, run, fnd, hna, kb in rows:
                fields = (
                    str(protocol),
                    _fmt(run),
                    "" if fnd is None else _fmt(fnd),
                    "" if hna is None else _fmt(hna),
                    _fmt(kb),
                )
                fh.write(",".join(fields) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write summary CSV {path}: {exc}") from exc


def read_series_csv(path) -> list[dict]:
    """Parse a series file back into numeric rows (round-trip helper)."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(
                {
                    "round": int(rec["round"]),
                    "alive": float(rec["alive"]),
                    "dead": float(rec["dead"]),
                    "total_residual_j": float(rec["total_residual_j"]),
                    "packets_cum_kb": float(rec["packets_cum_kb"]),
                    "failovers_cum": float(rec["failovers_cum"]),
                }
            )
    return rows


def series_filename(protocol: str, scenario: str, run_index: int) -> str:
    return f"{protocol}_{scenario}_run{run_index}.csv"


def mean_filename(protocol: str, scenario: str) -> str:
    return f"{protocol}_{scenario}_mean.csv"
