"""Power side of the coexistence model.

Two-slope path loss (free space up to a breakpoint, steeper log-distance
decay beyond it), spectral-overlap weighting of interferer power into the
victim receive band, SIR arithmetic, and the derivation of the three
coexistence range radii from link budgets.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "Standard",
    "PathLossModel",
    "RadioProfile",
    "UniformPsd",
    "SincSquaredPsd",
    "SpectralShape",
    "CoexistenceRanges",
    "WLAN_11B_DEFAULT",
    "WLAN_11G_DEFAULT",
    "ZIGBEE_154_DEFAULT",
    "path_loss_db",
    "received_power_dbm",
    "inband_fraction_db",
    "sir_db",
    "sensing_range_m",
    "coexistence_ranges",
]


class Standard(enum.Enum):
    WLAN_11B = "wlan11b"
    WLAN_11G = "wlan11g"
    ZIGBEE_154 = "zigbee154"


@dataclass(frozen=True)
class PathLossModel:
    """Two-slope propagation model.

    Free-space loss 20*log10(4*pi*d/lambda) up to ``breakpoint_m``, then an
    additional 10*far_exponent*log10(d/d0) beyond it. Continuous at the
    breakpoint by construction.
    """

    wavelength_m: float = 0.125
    breakpoint_m: float = 8.0
    far_exponent: float = 4.0

    def __post_init__(self) -> None:
        if self.wavelength_m <= 0.0:
            raise ValueError("wavelength_m must be positive")
        if self.breakpoint_m <= 0.0:
            raise ValueError("breakpoint_m must be positive")
        if self.far_exponent < 2.0:
            raise ValueError("far_exponent must be >= 2")


def path_loss_db(d_m: float, model: PathLossModel = PathLossModel()) -> float:
    """Path loss in dB at distance ``d_m``."""
    if d_m <= 0.0:
        raise ValueError(f"d_m must be positive, got {d_m!r}")
    free_space = 20.0 * math.log10(4.0 * math.pi * min(d_m, model.breakpoint_m) / model.wavelength_m)
    if d_m <= model.breakpoint_m:
        return free_space
    return free_space + 10.0 * model.far_exponent * math.log10(d_m / model.breakpoint_m)


def received_power_dbm(tx_dbm: float, d_m: float, model: PathLossModel = PathLossModel()) -> float:
    """Received power at distance ``d_m`` from a ``tx_dbm`` transmitter."""
    return tx_dbm - path_loss_db(d_m, model)


@dataclass(frozen=True)
class RadioProfile:
    """PHY/MAC parameter set of one standard (one column of the system table)."""

    standard: Standard
    tx_power_dbm: float
    rx_sensitivity_dbm: float
    bit_rate_bps: float
    bandwidth_hz: float
    center_freq_hz: float
    backoff_slot_s: float
    sifs_s: float
    cw_min: int
    payload_bytes: int
    ack_duration_s: float
    difs_s: float | None = None
    cca_s: float | None = None

    def __post_init__(self) -> None:
        if self.tx_power_dbm <= self.rx_sensitivity_dbm:
            raise ValueError("tx_power_dbm must exceed rx_sensitivity_dbm")
        if self.bandwidth_hz <= 0.0 or self.bit_rate_bps <= 0.0 or self.center_freq_hz <= 0.0:
            raise ValueError("bandwidth_hz, bit_rate_bps and center_freq_hz must be positive")
        if self.backoff_slot_s < 0.0 or self.sifs_s < 0.0 or self.ack_duration_s < 0.0:
            raise ValueError("durations must be >= 0")
        if self.cw_min < 1:
            raise ValueError("cw_min must be >= 1")
        if self.payload_bytes < 1:
            raise ValueError("payload_bytes must be >= 1")
        if self.standard in (Standard.WLAN_11B, Standard.WLAN_11G):
            if self.difs_s is None or self.cca_s is not None:
                raise ValueError("WLAN profiles define difs_s and leave cca_s unset")
        else:
            if self.cca_s is None or self.difs_s is not None:
                raise ValueError("802.15.4 profiles define cca_s and leave difs_s unset")
            # 9 B MAC header + 2 B FCS around the payload; PSDU is capped at 128 B.
            if self.payload_bytes + 11 > 128:
                raise ValueError("payload_bytes + 11 B framing exceeds the 128 B PSDU limit")


WLAN_11B_DEFAULT = RadioProfile(
    standard=Standard.WLAN_11B,
    tx_power_dbm=20.0,
    rx_sensitivity_dbm=-76.0,
    bit_rate_bps=11e6,
    bandwidth_hz=22e6,
    center_freq_hz=2412e6,
    backoff_slot_s=20e-6,
    sifs_s=10e-6,
    difs_s=50e-6,
    cw_min=31,
    payload_bytes=1024,
    ack_duration_s=304e-6,  # 14 B ACK at 1 Mb/s behind a 192 us long preamble
)

WLAN_11G_DEFAULT = RadioProfile(
    standard=Standard.WLAN_11G,
    tx_power_dbm=20.0,
    rx_sensitivity_dbm=-82.0,  # 6 Mb/s OFDM reference sensitivity
    bit_rate_bps=54e6,
    bandwidth_hz=22e6,
    center_freq_hz=2412e6,
    backoff_slot_s=9e-6,
    sifs_s=10e-6,
    difs_s=28e-6,
    cw_min=15,
    payload_bytes=1024,
    ack_duration_s=28e-6,
)

ZIGBEE_154_DEFAULT = RadioProfile(
    standard=Standard.ZIGBEE_154,
    tx_power_dbm=0.0,
    rx_sensitivity_dbm=-85.0,
    bit_rate_bps=250e3,
    bandwidth_hz=2e6,
    center_freq_hz=2410e6,  # non-standard channel center, kept as the reference default
    backoff_slot_s=320e-6,
    sifs_s=192e-6,
    cca_s=128e-6,
    cw_min=7,
    payload_bytes=1,
    ack_duration_s=352e-6,  # 11 B ACK frame at 250 kb/s
)


@dataclass(frozen=True)
class UniformPsd:
    """Flat power spectral density across the occupied bandwidth."""

    occupied_bandwidth_hz: float

    def __post_init__(self) -> None:
        if self.occupied_bandwidth_hz <= 0.0:
            raise ValueError("occupied_bandwidth_hz must be positive")


@dataclass(frozen=True)
class SincSquaredPsd:
    """sinc^2 power spectral density of a DSSS signal with the given chip rate."""

    occupied_bandwidth_hz: float
    chip_rate_hz: float

    def __post_init__(self) -> None:
        if self.occupied_bandwidth_hz <= 0.0:
            raise ValueError("occupied_bandwidth_hz must be positive")
        if self.chip_rate_hz <= 0.0:
            raise ValueError("chip_rate_hz must be positive")


SpectralShape = UniformPsd | SincSquaredPsd


def _sinc2(u: float) -> float:
    if u == 0.0:
        return 1.0
    x = math.pi * u
    s = math.sin(x) / x
    return s * s


def _adaptive_simpson(f, a: float, b: float, eps: float, depth: int = 50) -> float:
    """Classic adaptive Simpson quadrature with Richardson correction."""

    def simpson(x0: float, x2: float, f0: float, f1: float, f2: float) -> float:
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, eps, depth):
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl = f(xl)
        fr = f(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return (recurse(x0, xm, f0, fl, f1, left, eps / 2.0, depth - 1)
                + recurse(xm, x2, f1, fr, f2, right, eps / 2.0, depth - 1))

    fm = f(0.5 * (a + b))
    fa = f(a)
    fb = f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, eps, depth)


# Quadrature tolerance, as a fraction of the interferer's total power.
_PSD_INTEGRAL_TOL = 1e-9


def inband_fraction_db(
    interferer_center_hz: float,
    interferer_shape: SpectralShape,
    victim_center_hz: float,
    victim_bandwidth_hz: float,
) -> float | None:
    """Fraction of interferer power landing in the victim band, in dB (<= 0).

    Returns ``None`` when a uniform-PSD interferer does not overlap the
    victim band at all (no interference); the sinc^2 shape has unbounded
    support and always returns a finite value.
    """
    if victim_bandwidth_hz <= 0.0:
        raise ValueError("victim_bandwidth_hz must be positive")
    lo = victim_center_hz - victim_bandwidth_hz / 2.0
    hi = victim_center_hz + victim_bandwidth_hz / 2.0
    if isinstance(interferer_shape, UniformPsd):
        half = interferer_shape.occupied_bandwidth_hz / 2.0
        overlap = min(hi, interferer_center_hz + half) - max(lo, interferer_center_hz - half)
        if overlap <= 0.0:
            return None
        fraction = overlap / interferer_shape.occupied_bandwidth_hz
    else:
        chip = interferer_shape.chip_rate_hz
        # Normalised frequency keeps the quadrature well scaled; the total
        # power of sinc^2((f - c)/chip) over all f is exactly chip.
        u_lo = (lo - interferer_center_hz) / chip
        u_hi = (hi - interferer_center_hz) / chip
        fraction = _adaptive_simpson(_sinc2, u_lo, u_hi, _PSD_INTEGRAL_TOL)
    fraction = min(fraction, 1.0)
    return 10.0 * math.log10(fraction)


def sir_db(signal_dbm: float, inband_interference_dbm: float) -> float:
    """Signal-to-interference ratio in dB."""
    return signal_dbm - inband_interference_dbm


def _invert_path_loss(budget_db: float, model: PathLossModel) -> float:
    """Distance at which the path loss equals ``budget_db`` (exact two-slope inverse)."""
    breakpoint_loss = 20.0 * math.log10(4.0 * math.pi * model.breakpoint_m / model.wavelength_m)
    if budget_db <= breakpoint_loss:
        return model.wavelength_m / (4.0 * math.pi) * 10.0 ** (budget_db / 20.0)
    return model.breakpoint_m * 10.0 ** ((budget_db - breakpoint_loss) / (10.0 * model.far_exponent))


def sensing_range_m(
    tx_profile: RadioProfile,
    rx_profile: RadioProfile,
    path: PathLossModel = PathLossModel(),
    shape: SpectralShape | None = None,
) -> float:
    """Largest distance at which ``rx_profile`` still senses ``tx_profile``.

    Solves tx_power + inband_fraction - PL(d) = rx_sensitivity for d.
    Returns 0.0 when the spectra are disjoint (the budget never closes).
    """
    if shape is None:
        shape = UniformPsd(tx_profile.bandwidth_hz)
    fraction = inband_fraction_db(
        tx_profile.center_freq_hz, shape, rx_profile.center_freq_hz, rx_profile.bandwidth_hz
    )
    if fraction is None:
        return 0.0
    budget = tx_profile.tx_power_dbm + fraction - rx_profile.rx_sensitivity_dbm
    if budget <= 0.0:
        return 0.0
    return _invert_path_loss(budget, path)


@dataclass(frozen=True)
class CoexistenceRanges:
    """Radii of the three coexistence zones around the interferer.

    r1: both sides sense each other; r2: the 802.15.4 node senses the WLAN
    node but not vice versa; r3: no sensing either way, yet the WLAN still
    disturbs 802.15.4 reception.
    """

    r1_m: float
    r2_m: float
    r3_m: float

    def __post_init__(self) -> None:
        if not 0.0 < self.r1_m <= self.r2_m <= self.r3_m:
            raise ValueError(f"ranges must satisfy 0 < r1 <= r2 <= r3, got {self!r}")


def coexistence_ranges(
    wlan: RadioProfile,
    zigbee: RadioProfile,
    path: PathLossModel = PathLossModel(),
    sir_threshold_db: float = 6.0,
    interferer_shape: SpectralShape | None = None,
) -> CoexistenceRanges:
    """Derive the three coexistence radii from the two link budgets.

    r2 is the Zigbee-senses-WLAN range, r1 the smaller of the two mutual
    sensing ranges, and r3 the largest distance at which the WLAN in-band
    power still reaches (zigbee sensitivity - sir_threshold), taking the
    receiver sensitivity as the received-signal proxy.
    """
    if interferer_shape is None:
        interferer_shape = UniformPsd(wlan.bandwidth_hz)
    wlan_senses_zigbee = sensing_range_m(zigbee, wlan, path, UniformPsd(zigbee.bandwidth_hz))
    zigbee_senses_wlan = sensing_range_m(wlan, zigbee, path, interferer_shape)
    fraction = inband_fraction_db(
        wlan.center_freq_hz, interferer_shape, zigbee.center_freq_hz, zigbee.bandwidth_hz
    )
    if fraction is None:
        raise ValueError("disjoint spectra: no coexistence ranges exist")
    harm_budget = wlan.tx_power_dbm + fraction - (zigbee.rx_sensitivity_dbm - sir_threshold_db)
    r3 = _invert_path_loss(harm_budget, path) if harm_budget > 0.0 else 0.0
    return CoexistenceRanges(
        r1_m=min(wlan_senses_zigbee, zigbee_senses_wlan),
        r2_m=zigbee_senses_wlan,
        r3_m=r3,
    )
