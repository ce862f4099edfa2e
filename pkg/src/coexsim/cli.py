"""Command-line front end: ranges, ber, sim and sweep subcommands.

Results go to stdout (or ``--out``) as CSV with a ``#``-prefixed metadata
block; diagnostics go to stderr. Exit status is 0 on success, 2 for
configuration problems and 1 for runtime failures.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import __version__
from .config import ConfigError, ScenarioConfig, default_config, parse_config
from .phy_ber import ber_from_snr, per_from_ber
from .propagation import SincSquaredPsd, UniformPsd, coexistence_ranges
from .results import ResultTable
from .simulation import run_simulation, sweep_distance, sweep_offset
from .units import db_to_linear

_EXIT_CONFIG = 2
_EXIT_RUNTIME = 1


def _float_list(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _snr_range(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range spec {text!r}")
    if count < 1:
        raise argparse.ArgumentTypeError("count must be >= 1")
    if count == 1:
        return [start]
    step = (stop - start) / (count - 1)
    return [start + i * step for i in range(count)]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coexsim",
        description="802.15.4 / 802.11b coexistence analysis and simulation",
    )
    parser.add_argument("--version", action="version", version=f"coexsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="scenario file path (defaults to built-in presets)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--sir-threshold-db", type=float, help="override the SIR threshold")
        p.add_argument("--duration", type=float, metavar="S", help="override the run duration")
        p.add_argument("--psd", choices=("uniform", "sinc2"), help="interferer spectral shape")
        p.add_argument("--out", default="stdout", help="output CSV path, or 'stdout'")

    p_ranges = sub.add_parser("ranges", help="coexistence range radii for the configured profiles")
    common(p_ranges)
    p_ranges.set_defaults(handler=_cmd_ranges)

    p_ber = sub.add_parser("ber", help="SNR to BER/PER curve for the configured PHY")
    common(p_ber)
    p_ber.add_argument("--snr-db", type=_float_list, metavar="LIST",
                       help="comma-separated SNR grid in dB (emitted in input order)")
    p_ber.add_argument("--snr-db-range", type=_snr_range, metavar="START:STOP:COUNT",
                       help="inclusive linear SNR grid in dB")
    p_ber.set_defaults(handler=_cmd_ber)

    p_sim = sub.add_parser("sim", help="run one simulated scenario")
    common(p_sim)
    p_sim.set_defaults(handler=_cmd_sim)

    p_sweep = sub.add_parser("sweep", help="simulate a distance or channel-offset sweep")
    common(p_sweep)
    axis = p_sweep.add_mutually_exclusive_group(required=True)
    axis.add_argument("--sweep-distance", type=_float_list, metavar="LIST",
                      help="interferer distances in meters")
    axis.add_argument("--sweep-offset-mhz", type=_float_list, metavar="LIST",
                      help="victim channel offsets from the WLAN center, MHz")
    p_sweep.set_defaults(handler=_cmd_sweep)

    return parser


def _load_config(args: argparse.Namespace) -> ScenarioConfig:
    if args.config is None:
        cfg = default_config()
    else:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from None
        cfg = parse_config(text)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.sir_threshold_db is not None:
        overrides["sir_threshold_db"] = args.sir_threshold_db
    if args.duration is not None:
        overrides["duration_s"] = args.duration
    if args.psd == "uniform":
        overrides["interferer_shape"] = UniformPsd(cfg.scenario.wlan_profile.bandwidth_hz)
    elif args.psd == "sinc2":
        overrides["interferer_shape"] = SincSquaredPsd(
            occupied_bandwidth_hz=cfg.scenario.wlan_profile.bandwidth_hz,
            chip_rate_hz=11e6,
        )
    if not overrides:
        return cfg
    try:
        return replace(cfg, scenario=replace(cfg.scenario, **overrides))
    except ValueError as exc:
        raise ConfigError(f"invalid override: {exc}") from None


def _new_table(cfg: ScenarioConfig, columns: list[str]) -> ResultTable:
    return ResultTable(
        columns=columns,
        metadata={
            "tool": f"coexsim {__version__}",
            "seed": str(cfg.scenario.seed),
            "scenario": cfg.scenario.scenario_hash(),
        },
    )


def _cmd_ranges(cfg: ScenarioConfig, args: argparse.Namespace) -> ResultTable:
    ranges = coexistence_ranges(
        cfg.scenario.wlan_profile,
        cfg.scenario.zigbee_profile,
        cfg.scenario.path,
        cfg.scenario.sir_threshold_db,
        cfg.scenario.effective_shape(),
    )
    table = _new_table(cfg, ["range_name", "meters"])
    table.append("r1", ranges.r1_m)
    table.append("r2", ranges.r2_m)
    table.append("r3", ranges.r3_m)
    return table


def _cmd_ber(cfg: ScenarioConfig, args: argparse.Namespace) -> ResultTable:
    grid = args.snr_db if args.snr_db is not None else args.snr_db_range
    if grid is None:
        grid = _snr_range("-10:10:41")
    timing = cfg.scenario.effective_frame_timing()
    packet_bits = 8 * (timing.phy_header_bytes + timing.mac_overhead_bytes
                       + timing.payload_bytes)
    table = _new_table(cfg, ["snr_db", "ber", "per"])
    for snr_db in grid:
        ber = ber_from_snr(db_to_linear(snr_db), cfg.ber_model)
        table.append(snr_db, ber, per_from_ber(ber, packet_bits))
    return table


_SIM_COLUMNS = ["per", "stderr", "rssi_dbm", "range_class", "packets_sent"]


def _cmd_sim(cfg: ScenarioConfig, args: argparse.Namespace) -> ResultTable:
    result = run_simulation(cfg.scenario)
    table = _new_table(cfg, _SIM_COLUMNS)
    table.append(result.per, result.stderr, result.rssi_dbm,
                 result.range_class.value, result.packets_sent)
    return table


def _cmd_sweep(cfg: ScenarioConfig, args: argparse.Namespace) -> ResultTable:
    if args.sweep_distance is not None:
        rows = sweep_distance(cfg.scenario, args.sweep_distance)
        swept_column = "distance_m"
        swept_values = args.sweep_distance
    else:
        rows = sweep_offset(cfg.scenario, [off * 1e6 for off in args.sweep_offset_mhz])
        swept_column = "offset_mhz"
        swept_values = args.sweep_offset_mhz
    table = _new_table(cfg, [swept_column] + _SIM_COLUMNS)
    for swept, (_, result) in zip(swept_values, rows):
        table.append(swept, result.per, result.stderr, result.rssi_dbm,
                     result.range_class.value, result.packets_sent)
    return table


def _emit(table: ResultTable, out: str) -> None:
    if out == "stdout":
        table.to_csv(sys.stdout)
    else:
        table.write_csv(out)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
        table = args.handler(cfg, args)
    except ConfigError as exc:
        print(f"coexsim: config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - report, return distinct status
        print(f"coexsim: error: {exc}", file=sys.stderr)
        return _EXIT_RUNTIME
    _emit(table, args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
