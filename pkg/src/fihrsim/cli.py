"""Command-line front end: scenario presets, config files, batch runs.

The config file is flat INI-style text: `[section]` headers and
`key = value` lines, `#`/`;` comments.  Sections and keys are listed in
_SCHEMA below; anything else is rejected with its line number.  Explicit
command-line flags override config-file values, which override the
scenario preset defaults.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .fuzzy import (
    COMR_LABELS,
    DEFAULT_RULES,
    DISTANCE_LABELS,
    ENERGY_LABELS,
    FuzzyConfig,
    FuzzyVariable,
    LeftShoulder,
    RightShoulder,
    Triangular,
    nine_term_partition,
    three_term_partition,
)
from .metrics import emit_csv, emit_summary_csv, mean_filename, series_filename
from .network import FieldConfig
from .protocols import ProtocolConfig
from .radio import RadioParams
from .simulation import PROTOCOLS, SimConfig, run_simulation


class ConfigError(ValueError):
    """Invalid configuration (bad key, bad value, broken invariant)."""


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    width: float
    height: float
    bs_position: tuple[float, float]
    node_count: int


SCENARIOS = {
    "scenario1": ScenarioPreset("scenario1", 100.0, 100.0, (50.0, 50.0), 100),
    "scenario2": ScenarioPreset("scenario2", 200.0, 200.0, (100.0, 100.0), 200),
}

DEFAULT_ROUNDS = 500
DEFAULT_RUNS = 20
DEFAULT_SEED = 1

_FUZZY_TERM_KEYS = (
    [f"distance_{label}" for label in DISTANCE_LABELS]
    + [f"energy_{label}" for label in ENERGY_LABELS]
    + [f"comr_{label}" for label in COMR_LABELS]
)

_SCHEMA = {
    "field": ("width", "height", "bs_x", "bs_y", "node_count", "initial_energy"),
    "radio": ("e_elec", "eps_fs", "eps_mp", "e_da"),
    "protocol": (
        "t_probability",
        "comr_threshold",
        "adv_radius",
        "failover_threshold",
        "m_transmissions",
        "data_bits",
        "ctrl_bits",
    ),
    "fuzzy": tuple(["comr_max"] + _FUZZY_TERM_KEYS),
    "simulation": ("protocol", "rounds", "runs", "seed", "fault_rate"),
}


def read_config_file(path) -> dict[str, dict[str, tuple[str, int]]]:
    """Parse an INI-style file into {section: {key: (raw, line)}}.

    Unknown sections or keys are rejected with their line number; a
    missing file surfaces as the usual OSError.
    """
    path = Path(path)
    with open(path) as fh:
        lines = fh.readlines()
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SCHEMA:
                raise ConfigError(f"{path}:{lineno}: unknown section [{name}]")
            current = name
            sections.setdefault(name, {})
        elif "=" in line:
            if current is None:
                raise ConfigError(f"{path}:{lineno}: key outside any section")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _SCHEMA[current]:
                raise ConfigError(
                    f"{path}:{lineno}: unknown key {key!r} in section [{current}]"
                )
            sections[current][key] = (value, lineno)
        else:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value' or '[section]'")
    return sections


def _convert(raw: str, line: int, typ, label: str):
    try:
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
    except ValueError:
        raise ConfigError(f"line {line}: {label} must be a {typ.__name__}, got {raw!r}")
    return raw


def _take(section: dict, key: str, typ, default, label: str):
    if key not in section:
        return default
    raw, line = section[key]
    return _convert(raw, line, typ, label)


def _breakpoints(raw: str, line: int, key: str, count: int) -> tuple[float, ...]:
    parts = raw.replace(",", " ").split()
    if len(parts) != count:
        raise ConfigError(f"line {line}: {key} expects {count} breakpoints")
    return tuple(
        _convert(part, line, float, f"{key} breakpoint") for part in parts
    )


def _variable_with_overrides(
    name: str,
    lo: float,
    hi: float,
    labels: tuple[str, ...],
    default_var: FuzzyVariable,
    fuzzy_section: dict,
    prefix: str,
) -> FuzzyVariable:
    terms = []
    last = len(labels) - 1
    for idx, label in enumerate(labels):
        key = f"{prefix}_{label}"
        if key in fuzzy_section:
            raw, line = fuzzy_section[key]
            if idx == 0:
                shape, count = LeftShoulder, 2
            elif idx == last:
                shape, count = RightShoulder, 2
            else:
                shape, count = Triangular, 3
            values = _breakpoints(raw, line, key, count)
            try:
                mf = shape(*values)
            except ValueError as exc:
                raise ConfigError(f"line {line}: {key}: {exc}") from exc
        else:
            mf = default_var.terms[idx][1]
        terms.append((label, mf))
    try:
        return FuzzyVariable(name, lo, hi, tuple(terms))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _line_context(message: str, file_values: dict) -> str:
    for section, entries in file_values.items():
        for key, (_, line) in entries.items():
            if f"{section}.{key}" in message:
                return f"{message} (line {line})"
    return message


def build_sim_config(
    scenario: str = "scenario1",
    protocol: str = "fihr",
    file_values: dict | None = None,
    flag_overrides: dict | None = None,
) -> SimConfig:
    """Layer preset defaults, config-file values and explicit flags."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    fv = file_values or {}
    flags = flag_overrides or {}
    preset = SCENARIOS[scenario]

    f = fv.get("field", {})
    field_cfg = FieldConfig(
        width=_take(f, "width", float, preset.width, "field.width"),
        height=_take(f, "height", float, preset.height, "field.height"),
        bs_position=(
            _take(f, "bs_x", float, preset.bs_position[0], "field.bs_x"),
            _take(f, "bs_y", float, preset.bs_position[1], "field.bs_y"),
        ),
        node_count=_take(f, "node_count", int, preset.node_count, "field.node_count"),
        initial_energy=_take(f, "initial_energy", float, 3.0, "field.initial_energy"),
    )

    r = fv.get("radio", {})
    try:
        radio = RadioParams(
            e_elec=_take(r, "e_elec", float, 50e-9, "radio.e_elec"),
            eps_fs=_take(r, "eps_fs", float, 10e-12, "radio.eps_fs"),
            eps_mp=_take(r, "eps_mp", float, 0.004e-12, "radio.eps_mp"),
            e_da=_take(r, "e_da", float, 5e-9, "radio.e_da"),
        )
    except ValueError as exc:
        raise ConfigError(_line_context(str(exc), fv)) from exc

    try:
        field_cfg.validate()
    except ValueError as exc:
        raise ConfigError(_line_context(str(exc), fv)) from exc

    fz = fv.get("fuzzy", {})
    max_distance = field_cfg.max_bs_distance()
    comr_max = _take(fz, "comr_max", float, 0.5 * max_distance, "fuzzy.comr_max")
    if comr_max <= 0:
        raise ConfigError(_line_context("fuzzy.comr_max must be > 0", fv))
    energy_default = three_term_partition(
        "energy", 0.0, field_cfg.initial_energy, ENERGY_LABELS
    )
    distance_default = three_term_partition(
        "distance", 0.0, max_distance, DISTANCE_LABELS
    )
    comr_default = nine_term_partition("comr", 0.0, comr_max)
    try:
        fuzzy_cfg = FuzzyConfig(
            energy=_variable_with_overrides(
                "energy", 0.0, field_cfg.initial_energy, ENERGY_LABELS,
                energy_default, fz, "energy",
            ),
            distance=_variable_with_overrides(
                "distance", 0.0, max_distance, DISTANCE_LABELS,
                distance_default, fz, "distance",
            ),
            comr=_variable_with_overrides(
                "comr", 0.0, comr_max, COMR_LABELS, comr_default, fz, "comr",
            ),
            rules=DEFAULT_RULES,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    p = fv.get("protocol", {})
    diagonal = math.hypot(field_cfg.width, field_cfg.height)
    proto = ProtocolConfig(
        comr_threshold=_take(
            p, "comr_threshold", float, 0.9 * comr_max, "protocol.comr_threshold"
        ),
        adv_radius=_take(p, "adv_radius", float, 0.5 * diagonal, "protocol.adv_radius"),
        t_probability=_take(p, "t_probability", float, 0.1, "protocol.t_probability"),
        failover_threshold=_take(
            p, "failover_threshold", int, 3, "protocol.failover_threshold"
        ),
        m_transmissions=_take(p, "m_transmissions", int, 3, "protocol.m_transmissions"),
        data_bits=_take(p, "data_bits", int, 32000, "protocol.data_bits"),
        ctrl_bits=_take(p, "ctrl_bits", int, 160, "protocol.ctrl_bits"),
    )

    s = fv.get("simulation", {})
    config = SimConfig(
        protocol=protocol,
        rounds=flags.get("rounds")
        if flags.get("rounds") is not None
        else _take(s, "rounds", int, DEFAULT_ROUNDS, "simulation.rounds"),
        field=field_cfg,
        proto=proto,
        radio=radio,
        fuzzy=fuzzy_cfg,
        fault_rate=flags.get("fault_rate")
        if flags.get("fault_rate") is not None
        else _take(s, "fault_rate", float, 0.0, "simulation.fault_rate"),
        seed=flags.get("seed")
        if flags.get("seed") is not None
        else _take(s, "seed", int, DEFAULT_SEED, "simulation.seed"),
        runs=flags.get("runs")
        if flags.get("runs") is not None
        else _take(s, "runs", int, DEFAULT_RUNS, "simulation.runs"),
    )
    try:
        config.validate()
    except ValueError as exc:
        raise ConfigError(_line_context(str(exc), fv)) from exc
    return config


def parse_config(path, scenario: str = "scenario1", protocol: str = "fihr") -> SimConfig:
    """Load and validate a config file on top of a scenario preset."""
    return build_sim_config(scenario, protocol, read_config_file(path))


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are 1
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fihrsim", description=__doc__)
    parser.add_argument("--scenario", choices=sorted(SCENARIOS), default=None)
    parser.add_argument(
        "--protocol", choices=list(PROTOCOLS) + ["all"], default=None
    )
    parser.add_argument("--runs", type=int, default=None)
    parser.add_argument("--rounds", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--fault-rate", type=float, default=None)
    parser.add_argument("--config", default=None)
    parser.add_argument("--out", default="results")
    parser.add_argument("--compare", action="store_true")
    return parser


def _print_comparison(rows) -> None:
    print(f"{'protocol':<10}{'mean_fnd':>12}{'mean_hna':>12}{'mean_throughput_kb':>22}")
    for protocol, summary in rows:
        fnd = "-" if summary.fnd is None else f"{summary.fnd:.2f}"
        hna = "-" if summary.hna is None else f"{summary.hna:.2f}"
        print(f"{protocol:<10}{fnd:>12}{hna:>12}{summary.throughput_kb:>22.2f}")


def run_cli(argv=None) -> int:
    """Execute the requested simulations; 0 on success, 1 on validation
    errors, 2 on I/O errors."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)

        file_values = read_config_file(args.config) if args.config else {}
        scenario = args.scenario or "scenario1"
        requested = args.protocol
        if requested is None:
            sim_section = file_values.get("simulation", {})
            if "protocol" in sim_section:
                requested = sim_section["protocol"][0]
            else:
                requested = "all"
        if requested == "all":
            protocols = list(PROTOCOLS)
        elif requested in PROTOCOLS:
            protocols = [requested]
        else:
            raise ConfigError(f"simulation.protocol must be one of {PROTOCOLS} or 'all'")
        flags = {
            "runs": args.runs,
            "rounds": args.rounds,
            "seed": args.seed,
            "fault_rate": args.fault_rate,
        }

        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)

        summary_rows = []
        comparison = []
        for protocol in protocols:
            config = build_sim_config(scenario, protocol, file_values, flags)
            result = run_simulation(config)
            for run in result.runs:
                emit_csv(
                    run.series,
                    out_dir / series_filename(protocol, scenario, run.run_index),
                    config.proto.data_bits,
                )
                summary_rows.append(
                    (
                        protocol,
                        run.run_index,
                        run.summary.fnd,
                        run.summary.hna,
                        run.summary.throughput_kb,
                    )
                )
            emit_csv(
                result.mean_series,
                out_dir / mean_filename(protocol, scenario),
                config.proto.data_bits,
            )
            comparison.append((protocol, result.mean_summary))
        emit_summary_csv(summary_rows, out_dir / "summary.csv")
        if args.compare:
            _print_comparison(comparison)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
