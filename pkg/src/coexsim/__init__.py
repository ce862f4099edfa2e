"""Zigbee (IEEE 802.15.4) packet error rate under IEEE 802.11b interference.

A joint power/timing coexistence model: closed-form BER/PER chain for the
O-QPSK PHY, two-slope path loss with spectral-overlap weighting, coexistence
range derivation, an alternating-renewal analytic PER predictor, and a
seeded discrete-event CSMA/CA simulation that cross-validates it.
"""

__version__ = "0.1.0"

from .mac_timing import (
    FrameTiming,
    IdleGapModel,
    RangeClass,
    analytic_success_probability,
    cca_fit_probability,
    r2_clear_condition,
    sample_idle_gap,
    zigbee_frame_airtime,
)
from .phy_ber import (
    BerModel,
    DutyCycleModel,
    OQPSK_915MHZ,
    OQPSK_2450MHZ,
    ber_from_snr,
    channel_occupancy,
    ebn0_to_esn0,
    per_from_ber,
    ser_noncoherent_mfsk,
    ser_to_ber,
    snr_to_ebn0,
)
from .propagation import (
    CoexistenceRanges,
    PathLossModel,
    RadioProfile,
    SincSquaredPsd,
    SpectralShape,
    Standard,
    UniformPsd,
    WLAN_11B_DEFAULT,
    WLAN_11G_DEFAULT,
    ZIGBEE_154_DEFAULT,
    coexistence_ranges,
    inband_fraction_db,
    path_loss_db,
    received_power_dbm,
    sensing_range_m,
    sir_db,
)
from .simulation import (
    PerResult,
    Scenario,
    classify_range,
    derive_child_seed,
    link_sir_db,
    predict_per,
    run_simulation,
    sweep_distance,
    sweep_offset,
)
from .units import db_to_linear, linear_to_db

__all__ = [
    "__version__",
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
    "RangeClass",
    "IdleGapModel",
    "FrameTiming",
    "sample_idle_gap",
    "cca_fit_probability",
    "zigbee_frame_airtime",
    "r2_clear_condition",
    "analytic_success_probability",
    "Scenario",
    "PerResult",
    "classify_range",
    "link_sir_db",
    "run_simulation",
    "sweep_distance",
    "sweep_offset",
    "predict_per",
    "derive_child_seed",
    "db_to_linear",
    "linear_to_db",
]
