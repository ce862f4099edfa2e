"""Timing side of the coexistence model.

The WLAN channel alternates between busy exchanges and contention gaps of
DIFS plus a uniformly drawn backoff. These helpers sample that gap, compute
how often an 802.15.4 clear-channel assessment fits inside it, and turn the
alternating renewal picture into a closed-form per-attempt success
probability for each coexistence range class.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .propagation import RadioProfile

__all__ = [
    "RangeClass",
    "IdleGapModel",
    "FrameTiming",
    "sample_idle_gap",
    "cca_fit_probability",
    "zigbee_frame_airtime",
    "r2_clear_condition",
    "analytic_success_probability",
]


class RangeClass(enum.Enum):
    R1 = "R1"          # mutual carrier sensing
    R2 = "R2"          # only the 802.15.4 side senses the WLAN
    R3 = "R3"          # no sensing, blind transmissions, interference remains
    BEYOND = "Beyond"  # out of interference reach


@dataclass(frozen=True)
class IdleGapModel:
    """Distribution of the WLAN inter-frame idle gap: DIFS + m * slot, m ~ U{0..cw_min}."""

    difs_s: float
    backoff_slot_s: float
    cw_min: int

    def __post_init__(self) -> None:
        if self.difs_s < 0.0 or self.backoff_slot_s < 0.0:
            raise ValueError("durations must be >= 0")
        if self.cw_min < 1:
            raise ValueError("cw_min must be >= 1")

    @classmethod
    def from_profile(cls, profile: RadioProfile) -> "IdleGapModel":
        if profile.difs_s is None:
            raise ValueError("profile has no DIFS; idle-gap model needs a WLAN profile")
        return cls(difs_s=profile.difs_s, backoff_slot_s=profile.backoff_slot_s,
                   cw_min=profile.cw_min)

    def mean_gap_s(self) -> float:
        return self.difs_s + self.backoff_slot_s * self.cw_min / 2.0


@dataclass(frozen=True)
class FrameTiming:
    """Airtime-relevant byte counts and MAC constants of the 802.15.4 link."""

    payload_bytes: int = 1
    bit_rate_bps: float = 250e3
    ack_duration_s: float = 352e-6
    sifs_s: float = 192e-6
    cca_s: float = 128e-6
    phy_header_bytes: int = 6   # preamble + SFD + PHR
    mac_overhead_bytes: int = 11  # MAC header + FCS

    def __post_init__(self) -> None:
        if self.phy_header_bytes + self.mac_overhead_bytes + self.payload_bytes < 1:
            raise ValueError("total frame size must be >= 1 byte")
        if min(self.payload_bytes, self.phy_header_bytes, self.mac_overhead_bytes) < 0:
            raise ValueError("byte counts must be >= 0")
        if min(self.ack_duration_s, self.sifs_s, self.cca_s) < 0.0:
            raise ValueError("durations must be >= 0")

    @classmethod
    def from_profile(cls, profile: RadioProfile, phy_header_bytes: int = 6,
                     mac_overhead_bytes: int = 11) -> "FrameTiming":
        if profile.cca_s is None:
            raise ValueError("profile has no CCA; frame timing needs an 802.15.4 profile")
        return cls(
            payload_bytes=profile.payload_bytes,
            bit_rate_bps=profile.bit_rate_bps,
            ack_duration_s=profile.ack_duration_s,
            sifs_s=profile.sifs_s,
            cca_s=profile.cca_s,
            phy_header_bytes=phy_header_bytes,
            mac_overhead_bytes=mac_overhead_bytes,
        )


def sample_idle_gap(model: IdleGapModel, rng: random.Random) -> float:
    """Draw one idle gap: DIFS + m * slot with m uniform on {0, .., cw_min}."""
    m = rng.randint(0, model.cw_min)
    return model.difs_s + m * model.backoff_slot_s


def cca_fit_probability(model: IdleGapModel, cca_s: float) -> float:
    """Probability that a CCA of the given length fits inside one idle gap."""
    if cca_s < 0.0:
        raise ValueError("cca_s must be >= 0")
    fits = sum(1 for m in range(model.cw_min + 1)
               if model.difs_s + m * model.backoff_slot_s >= cca_s)
    return fits / (model.cw_min + 1)


def zigbee_frame_airtime(timing: FrameTiming) -> float:
    """Airtime of one data frame: all framing bytes at the PHY bit rate."""
    if timing.bit_rate_bps <= 0.0:
        raise ValueError("bit_rate_bps must be positive")
    total_bytes = timing.phy_header_bytes + timing.mac_overhead_bytes + timing.payload_bytes
    return total_bytes * 8 / timing.bit_rate_bps


def r2_clear_condition(t_idle_s: float, timing: FrameTiming) -> bool:
    """Whether one idle gap holds a full CCA + data + SIFS + ACK exchange."""
    required = timing.cca_s + zigbee_frame_airtime(timing) + timing.sifs_s + timing.ack_duration_s
    return t_idle_s >= required


def _mean_excess_gap(model: IdleGapModel, needed_s: float) -> float:
    """E[(gap - needed)^+] over the uniform backoff draw."""
    total = 0.0
    for m in range(model.cw_min + 1):
        gap = model.difs_s + m * model.backoff_slot_s
        if gap > needed_s:
            total += gap - needed_s
    return total / (model.cw_min + 1)


def analytic_success_probability(
    range_class: RangeClass,
    wlan_busy_s: float,
    gap_model: IdleGapModel,
    timing: FrameTiming,
    power_pass: bool,
    ack_enabled: bool,
) -> float:
    """Per-attempt success probability of one 802.15.4 transmission.

    The WLAN channel is an alternating renewal process (busy exchange, then
    an idle gap). A packet survives if the in-band SIR condition holds
    (``power_pass``) or if its vulnerable window avoids the WLAN entirely.
    At a stationary random phase that avoidance probability is
    E[(gap - needed)^+] / E[cycle], where ``needed`` depends on the range
    class: the frame (plus SIFS + ACK when acknowledged) must fit for blind
    R3 transmissions, a CCA must precede it in R2, and in R1 only the CCA
    has to fit because the WLAN defers once the frame is on the air.
    """
    if not isinstance(range_class, RangeClass):
        raise ValueError(f"invalid range class {range_class!r}")
    if wlan_busy_s < 0.0:
        raise ValueError("wlan_busy_s must be >= 0")
    if power_pass or range_class is RangeClass.BEYOND:
        return 1.0
    window = zigbee_frame_airtime(timing)
    if ack_enabled:
        window += timing.sifs_s + timing.ack_duration_s
    if range_class is RangeClass.R3:
        needed = window
    elif range_class is RangeClass.R2:
        needed = timing.cca_s + window
    else:  # R1
        needed = timing.cca_s
    cycle = wlan_busy_s + gap_model.mean_gap_s()
    return _mean_excess_gap(gap_model, needed) / cycle
