"""Scenario file parsing.

The format is flat ``key = value`` lines under optional ``[section]``
headers, with ``#`` comments and no nesting. Physical quantities carry their
unit in the key name (``..._dbm``, ``..._mhz``, ``..._us``, ``..._m``).
Profiles start from a named preset and may override individual fields:

    [wlan]
    preset = wlan11b-default
    tx_power_dbm = 20

    [zigbee]
    preset = zigbee154-default

    [scenario]
    d_interferer_m = 3
    seed = 42

Unknown keys, syntax errors and out-of-range values raise
:class:`ConfigError` naming the offending key and line.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .mac_timing import FrameTiming
from .phy_ber import BerModel, OQPSK_915MHZ, OQPSK_2450MHZ
from .propagation import (
    PathLossModel,
    RadioProfile,
    SincSquaredPsd,
    SpectralShape,
    UniformPsd,
    WLAN_11B_DEFAULT,
    WLAN_11G_DEFAULT,
    ZIGBEE_154_DEFAULT,
)
from .simulation import SATURATED, Scenario

__all__ = ["ConfigError", "ScenarioConfig", "parse_config", "default_config",
           "PRESET_PROFILES", "BER_PRESETS"]


class ConfigError(Exception):
    """Invalid scenario file: syntax, unknown key, or out-of-range value."""


PRESET_PROFILES: dict[str, RadioProfile] = {
    "wlan11b-default": WLAN_11B_DEFAULT,
    "wlan11g-default": WLAN_11G_DEFAULT,
    "zigbee154-default": ZIGBEE_154_DEFAULT,
}

BER_PRESETS: dict[str, BerModel] = {
    "oqpsk-915mhz": OQPSK_915MHZ,
    "oqpsk-2450mhz": OQPSK_2450MHZ,
}

def _num(kind: str, low=None, high=None, above=None) -> tuple:
    """Numeric schema entry: inclusive [low, high] bounds or exclusive ``above``."""
    return (kind, low, high, above)


# section -> key -> schema entry ("bool", "choice" or numeric via _num)
_SCHEMA: dict[str, dict[str, tuple]] = {
    "wlan": {
        "preset": ("choice", tuple(PRESET_PROFILES)),
        "tx_power_dbm": _num("float"),
        "rx_sensitivity_dbm": _num("float"),
        "bit_rate_bps": _num("float", above=0.0),
        "bandwidth_mhz": _num("float", above=0.0),
        "center_freq_mhz": _num("float", above=0.0),
        "backoff_slot_us": _num("float", low=0.0),
        "sifs_us": _num("float", low=0.0),
        "difs_us": _num("float", low=0.0),
        "cw_min": _num("int", low=1),
        "payload_bytes": _num("int", low=1),
        "ack_duration_us": _num("float", low=0.0),
    },
    "zigbee": {
        "preset": ("choice", tuple(PRESET_PROFILES)),
        "tx_power_dbm": _num("float"),
        "rx_sensitivity_dbm": _num("float"),
        "bit_rate_bps": _num("float", above=0.0),
        "bandwidth_mhz": _num("float", above=0.0),
        "center_freq_mhz": _num("float", above=0.0),
        "backoff_slot_us": _num("float", low=0.0),
        "sifs_us": _num("float", low=0.0),
        "cca_us": _num("float", low=0.0),
        "cw_min": _num("int", low=1),
        "payload_bytes": _num("int", low=1),
        "ack_duration_us": _num("float", low=0.0),
        "phy_header_bytes": _num("int", low=0),
        "mac_overhead_bytes": _num("int", low=0),
    },
    "path": {
        "wavelength_m": _num("float", above=0.0),
        "breakpoint_m": _num("float", above=0.0),
        "far_exponent": _num("float", low=2.0),
    },
    "scenario": {
        "d_interferer_m": _num("float", above=0.0),
        "d_link_m": _num("float", above=0.0),
        "sir_threshold_db": _num("float", low=0.0, high=20.0),
        "packet_rate_pps": _num("float", above=0.0),
        "traffic_mode": ("choice", ("periodic", "saturated")),
        "ack_enabled": ("bool",),
        "duration_s": _num("float", above=0.0),
        "seed": _num("int", low=0),
        "psd": ("choice", ("uniform", "sinc2")),
        "chip_rate_mhz": _num("float", above=0.0),
        "sir_soft_success": _num("float", high=1.0, above=0.0),
        "noise_snr_db": _num("float"),
        "wlan_cw_doubling": ("bool",),
    },
    "ber": {
        "preset": ("choice", tuple(BER_PRESETS)),
    },
}

_REQUIRED = ("wlan.preset", "zigbee.preset")

# RadioProfile field name and unit scale for each override key.
_PROFILE_FIELDS = {
    "tx_power_dbm": ("tx_power_dbm", 1.0),
    "rx_sensitivity_dbm": ("rx_sensitivity_dbm", 1.0),
    "bit_rate_bps": ("bit_rate_bps", 1.0),
    "bandwidth_mhz": ("bandwidth_hz", 1e6),
    "center_freq_mhz": ("center_freq_hz", 1e6),
    "backoff_slot_us": ("backoff_slot_s", 1e-6),
    "sifs_us": ("sifs_s", 1e-6),
    "difs_us": ("difs_s", 1e-6),
    "cca_us": ("cca_s", 1e-6),
    "cw_min": ("cw_min", 1),
    "payload_bytes": ("payload_bytes", 1),
    "ack_duration_us": ("ack_duration_s", 1e-6),
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario description, presets expanded."""

    scenario: Scenario
    ber_model: BerModel = OQPSK_915MHZ


def _tokenize(text: str) -> dict[tuple[str, str], tuple[str, int]]:
    entries: dict[tuple[str, str], tuple[str, int]] = {}
    section = "scenario"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SCHEMA:
                raise ConfigError(
                    f"line {lineno}: unknown section [{section}] "
                    f"(known: {', '.join(sorted(_SCHEMA))})")
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key = key.strip().lower()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if key not in _SCHEMA[section]:
            raise ConfigError(f"line {lineno}: unknown key '{section}.{key}'")
        if (section, key) in entries:
            raise ConfigError(f"line {lineno}: duplicate key '{section}.{key}'")
        entries[(section, key)] = (value, lineno)
    return entries


def _convert(section: str, key: str, value: str, lineno: int):
    spec = _SCHEMA[section][key]
    kind = spec[0]
    where = f"line {lineno}: '{section}.{key}'"
    if kind == "bool":
        lowered = value.lower()
        if lowered in ("true", "yes", "on", "1"):
            return True
        if lowered in ("false", "no", "off", "0"):
            return False
        raise ConfigError(f"{where} expects a boolean, got {value!r}")
    if kind == "choice":
        if value not in spec[1]:
            raise ConfigError(f"{where} must be one of {', '.join(spec[1])}, got {value!r}")
        return value
    try:
        number = int(value) if kind == "int" else float(value)
    except ValueError:
        raise ConfigError(f"{where} expects a {kind}, got {value!r}") from None
    _, low, high, above = spec
    if above is not None and number <= above:
        raise ConfigError(f"{where} out of range: {value} (must be > {above})")
    if low is not None and number < low:
        raise ConfigError(f"{where} out of range: {value} (must be >= {low})")
    if high is not None and number > high:
        raise ConfigError(f"{where} out of range: {value} (must be <= {high})")
    return number


def _build_profile(name: str, values: dict[str, object]) -> RadioProfile:
    preset = values.pop("preset", None)
    if preset is None:
        raise ConfigError(f"missing required keys: {name}.preset")
    profile = PRESET_PROFILES[preset]
    overrides = {}
    for key, value in values.items():
        field, scale = _PROFILE_FIELDS[key]
        overrides[field] = value * scale if scale != 1 else value
    if not overrides:
        return profile
    try:
        return replace(profile, **overrides)
    except ValueError as exc:
        raise ConfigError(f"invalid [{name}] profile: {exc}") from None


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario file into a ready-to-run configuration."""
    entries = _tokenize(text)
    missing = [dotted for dotted in _REQUIRED
               if tuple(dotted.split(".")) not in entries]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    values: dict[str, dict[str, object]] = {section: {} for section in _SCHEMA}
    for (section, key), (raw, lineno) in entries.items():
        values[section][key] = _convert(section, key, raw, lineno)

    zigbee_extra = {
        key: values["zigbee"].pop(key)
        for key in ("phy_header_bytes", "mac_overhead_bytes")
        if key in values["zigbee"]
    }
    wlan = _build_profile("wlan", values["wlan"])
    zigbee = _build_profile("zigbee", values["zigbee"])

    try:
        path = PathLossModel(**values["path"])
    except ValueError as exc:
        raise ConfigError(f"invalid [path] model: {exc}") from None

    sc = values["scenario"]
    shape: SpectralShape | None = None
    if sc.get("psd") == "sinc2":
        shape = SincSquaredPsd(
            occupied_bandwidth_hz=wlan.bandwidth_hz,
            chip_rate_hz=sc.get("chip_rate_mhz", 11.0) * 1e6,
        )

    frame_timing: FrameTiming | None = None
    if zigbee_extra:
        frame_timing = FrameTiming.from_profile(zigbee, **zigbee_extra)

    if sc.get("traffic_mode") == "saturated":
        offered: float | str = SATURATED
    else:
        offered = sc.get("packet_rate_pps", 50.0)

    try:
        scenario = Scenario(
            wlan_profile=wlan,
            zigbee_profile=zigbee,
            path=path,
            interferer_shape=shape,
            d_interferer_m=sc.get("d_interferer_m", 3.0),
            d_link_m=sc.get("d_link_m", 1.0),
            sir_threshold_db=sc.get("sir_threshold_db", 6.0),
            offered_load=offered,
            ack_enabled=sc.get("ack_enabled", False),
            duration_s=sc.get("duration_s", 10.0),
            seed=sc.get("seed", 1),
            sir_soft_success=sc.get("sir_soft_success"),
            noise_snr_db=sc.get("noise_snr_db"),
            wlan_cw_doubling=sc.get("wlan_cw_doubling", False),
            frame_timing=frame_timing,
        )
    except ValueError as exc:
        raise ConfigError(f"invalid scenario: {exc}") from None

    ber_model = BER_PRESETS[values["ber"].get("preset", "oqpsk-915mhz")]
    return ScenarioConfig(scenario=scenario, ber_model=ber_model)


def default_config() -> ScenarioConfig:
    """Configuration with both default presets and all default scenario values."""
    return ScenarioConfig(scenario=Scenario(), ber_model=OQPSK_915MHZ)
