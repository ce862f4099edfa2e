"""Bit, symbol and packet error model for the IEEE 802.15.4 O-QPSK PHY.

The receiver chain is modelled as non-coherent M-ary FSK: linear SNR is
mapped to Eb/N0 (matched filtering and half-sine pulse shaping), Eb/N0 to
Es/N0, Es/N0 to symbol error rate via the alternating-binomial MFSK
expression, and SER back to BER. A simple independent-bit model turns BER
into PER. The module also provides the duty-cycle channel occupancy split
used by the temporal interference model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BerModel",
    "DutyCycleModel",
    "OQPSK_915MHZ",
    "OQPSK_2450MHZ",
    "snr_to_ebn0",
    "ebn0_to_esn0",
    "ser_noncoherent_mfsk",
    "ser_to_ber",
    "ber_from_snr",
    "per_from_ber",
    "channel_occupancy",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class BerModel:
    """Modulation constants of one O-QPSK PHY option.

    ``matched_filter_gain`` is the SNR-to-Eb/N0 front-end factor (0.625 for
    matched filtering with half-sine pulse shaping); ``code_block_m`` is the
    orthogonal symbol-set size of the equivalent MFSK detector.
    """

    chip_rate_cps: float
    bit_rate_bps: float
    code_block_m: int = 16
    matched_filter_gain: float = 0.625

    def __post_init__(self) -> None:
        if self.chip_rate_cps <= 0.0 or self.bit_rate_bps <= 0.0:
            raise ValueError("chip_rate_cps and bit_rate_bps must be positive")
        if self.chip_rate_cps < self.bit_rate_bps:
            raise ValueError("chip_rate_cps must be >= bit_rate_bps")
        if not (isinstance(self.code_block_m, int) and _is_power_of_two(self.code_block_m)
                and self.code_block_m >= 2):
            raise ValueError(f"code_block_m must be a power of two >= 2, got {self.code_block_m!r}")
        if not 0.0 < self.matched_filter_gain <= 1.0:
            raise ValueError("matched_filter_gain must be in (0, 1]")


# 868/915 MHz band option: 1000 kchip/s, 250 kb/s, 16-symbol blocks.
OQPSK_915MHZ = BerModel(chip_rate_cps=1_000_000.0, bit_rate_bps=250_000.0)
# 2.4 GHz band option: 2000 kchip/s at the same bit rate.
OQPSK_2450MHZ = BerModel(chip_rate_cps=2_000_000.0, bit_rate_bps=250_000.0)


@dataclass(frozen=True)
class DutyCycleModel:
    """Periodic traffic description: fixed packet size at a given duty cycle."""

    packet_bytes: int
    bit_rate_bps: float
    duty_cycle: float = 0.1

    def __post_init__(self) -> None:
        if self.packet_bytes < 1:
            raise ValueError("packet_bytes must be >= 1")
        if self.bit_rate_bps <= 0.0:
            raise ValueError("bit_rate_bps must be positive")
        if not 0.0 < self.duty_cycle <= 1.0:
            raise ValueError(f"duty_cycle must be in (0, 1], got {self.duty_cycle!r}")


def snr_to_ebn0(snr_linear: float, model: BerModel) -> float:
    """Bit energy to noise density ratio for a given linear SNR.

    Equals ``matched_filter_gain * (chip_rate / bit_rate) * snr``; with the
    915 MHz constants this is 2.5 * SNR.
    """
    if snr_linear < 0.0:
        raise ValueError(f"snr_linear must be >= 0, got {snr_linear!r}")
    return model.matched_filter_gain * (model.chip_rate_cps / model.bit_rate_bps) * snr_linear


def ebn0_to_esn0(ebn0: float, model: BerModel) -> float:
    """Symbol energy ratio: log2(M) bits per symbol, so Es/N0 = log2(M) * Eb/N0."""
    if ebn0 < 0.0:
        raise ValueError(f"ebn0 must be >= 0, got {ebn0!r}")
    return math.log2(model.code_block_m) * ebn0


def ser_noncoherent_mfsk(esn0: float, m: int) -> float:
    """Symbol error rate of non-coherent M-ary FSK over AWGN.

    Evaluates (1/M) * sum_{j=2..M} (-1)^j C(M,j) exp(esn0 * (1/j - 1)).
    The alternating sum cancels heavily, so the exact binomial terms are
    accumulated with compensated (exact) summation; the result is accurate
    to better than 1e-12 relative error for esn0 in [0, 50] with M = 16.
    """
    if esn0 < 0.0:
        raise ValueError(f"esn0 must be >= 0, got {esn0!r}")
    if not (isinstance(m, int) and m >= 2 and _is_power_of_two(m)):
        raise ValueError(f"m must be a power of two >= 2, got {m!r}")
    terms = [
        (-1.0) ** j * math.comb(m, j) * math.exp(esn0 * (1.0 / j - 1.0))
        for j in range(2, m + 1)
    ]
    ps = math.fsum(terms) / m
    # Clamp away sub-epsilon excursions outside the attainable range.
    return min(max(ps, 0.0), (m - 1) / m)


def ser_to_ber(ps: float, m: int) -> float:
    """Convert symbol error rate to bit error rate: ber = ps * (M/2) / (M-1)."""
    if not 0.0 <= ps <= 1.0:
        raise ValueError(f"ps must be in [0, 1], got {ps!r}")
    if not (isinstance(m, int) and m >= 2 and _is_power_of_two(m)):
        raise ValueError(f"m must be a power of two >= 2, got {m!r}")
    return ps * (m / 2.0) / (m - 1.0)


def ber_from_snr(snr_linear: float, model: BerModel) -> float:
    """Full SNR-to-BER chain for one PHY option.

    Composition of :func:`snr_to_ebn0`, :func:`ebn0_to_esn0`,
    :func:`ser_noncoherent_mfsk` and :func:`ser_to_ber`; equal to 0.5 at
    snr = 0 and monotone non-increasing in snr.
    """
    esn0 = ebn0_to_esn0(snr_to_ebn0(snr_linear, model), model)
    ps = ser_noncoherent_mfsk(esn0, model.code_block_m)
    return ser_to_ber(ps, model.code_block_m)


def per_from_ber(ber: float, packet_bits: int) -> float:
    """Packet error rate under independent bit errors: 1 - (1 - ber)^bits."""
    if not 0.0 <= ber <= 1.0:
        raise ValueError(f"ber must be in [0, 1], got {ber!r}")
    if packet_bits < 1:
        raise ValueError("packet_bits must be >= 1")
    if ber == 1.0:
        return 1.0
    # expm1/log1p form keeps precision for small ber * bits.
    return -math.expm1(packet_bits * math.log1p(-ber))


def channel_occupancy(model: DutyCycleModel) -> tuple[float, float]:
    """Busy and idle durations (seconds) of one periodic transmission cycle.

    The channel is busy for one packet airtime and idle for
    ``busy * (1 - duty) / duty``, so busy / (busy + idle) equals the duty
    cycle exactly.
    """
    busy_s = model.packet_bytes * 8 / model.bit_rate_bps
    idle_s = busy_s * (1.0 - model.duty_cycle) / model.duty_cycle
    return busy_s, idle_s
