"""Seeded discrete-event simulation of one 802.15.4 link under saturated
802.11b interference.

The event kernel is a plain time-ordered queue with an insertion-order
tiebreak, so identical scenarios (including the seed) replay bit-identically.
Two state machines run on it: a saturated WLAN sender alternating between
contention gaps and data+SIFS+ACK exchanges, and an 802.15.4 sender doing
unslotted CSMA/CA. Carrier sensing between the two is binary per coexistence
range class; received power enters only through the per-scenario SIR test.
"""

from __future__ import annotations

import hashlib
import heapq
import math
import random
from dataclasses import dataclass, replace

from .mac_timing import (
    FrameTiming,
    IdleGapModel,
    RangeClass,
    analytic_success_probability,
    zigbee_frame_airtime,
)
from .phy_ber import OQPSK_2450MHZ, ber_from_snr, per_from_ber
from .propagation import (
    PathLossModel,
    RadioProfile,
    SpectralShape,
    UniformPsd,
    WLAN_11B_DEFAULT,
    ZIGBEE_154_DEFAULT,
    coexistence_ranges,
    inband_fraction_db,
    received_power_dbm,
    sir_db,
)
from .units import db_to_linear

__all__ = [
    "Scenario",
    "PerResult",
    "EventQueue",
    "classify_range",
    "link_sir_db",
    "run_simulation",
    "sweep_distance",
    "sweep_offset",
    "predict_per",
    "derive_child_seed",
]

SATURATED = "saturated"

# Unslotted CSMA/CA constants (macMinBE, macMaxBE, macMaxCSMABackoffs).
_MIN_BE = 3
_MAX_BE = 5
_MAX_CSMA_BACKOFFS = 4

_WLAN_CW_MAX = 1023

_MASK64 = (1 << 64) - 1


def derive_child_seed(seed: int, index: int) -> int:
    """Stable 64-bit mix of (seed, index) for independent sweep rows."""
    z = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class Scenario:
    """One coexistence experiment: geometry, spectra, traffic and seed.

    ``d_interferer_m`` is the WLAN transmitter to 802.15.4 receiver distance
    (the swept quantity), ``d_link_m`` the 802.15.4 transmitter to receiver
    distance. ``offered_load`` is a packet rate in packets/second or
    ``"saturated"``. ``sir_soft_success``, when set, makes an overlapped
    packet that passes the SIR test survive only with that probability.
    ``noise_snr_db`` adds an optional thermal-noise residual loss floor.
    """

    wlan_profile: RadioProfile = WLAN_11B_DEFAULT
    zigbee_profile: RadioProfile = ZIGBEE_154_DEFAULT
    path: PathLossModel = PathLossModel()
    interferer_shape: SpectralShape | None = None
    d_interferer_m: float = 3.0
    d_link_m: float = 1.0
    sir_threshold_db: float = 6.0
    offered_load: float | str = 50.0
    ack_enabled: bool = False
    duration_s: float = 10.0
    seed: int = 1
    sir_soft_success: float | None = None
    noise_snr_db: float | None = None
    wlan_cw_doubling: bool = False
    frame_timing: FrameTiming | None = None

    def __post_init__(self) -> None:
        if self.d_interferer_m <= 0.0 or self.d_link_m <= 0.0:
            raise ValueError("distances must be positive")
        if self.duration_s <= 0.0:
            raise ValueError("duration_s must be positive")
        if not 0.0 <= self.sir_threshold_db <= 20.0:
            raise ValueError("sir_threshold_db must be in [0, 20]")
        if isinstance(self.offered_load, str):
            if self.offered_load != SATURATED:
                raise ValueError(f"offered_load must be a rate or {SATURATED!r}")
        elif self.offered_load <= 0.0:
            raise ValueError("offered_load must be positive")
        if self.sir_soft_success is not None and not 0.0 < self.sir_soft_success <= 1.0:
            raise ValueError("sir_soft_success must be in (0, 1]")
        if self.wlan_profile.difs_s is None:
            raise ValueError("wlan_profile must be a WLAN profile (with DIFS)")
        if self.zigbee_profile.cca_s is None:
            raise ValueError("zigbee_profile must be an 802.15.4 profile (with CCA)")

    def effective_shape(self) -> SpectralShape:
        if self.interferer_shape is not None:
            return self.interferer_shape
        return UniformPsd(self.wlan_profile.bandwidth_hz)

    def effective_frame_timing(self) -> FrameTiming:
        if self.frame_timing is not None:
            return self.frame_timing
        return FrameTiming.from_profile(self.zigbee_profile)

    def scenario_hash(self) -> str:
        return hashlib.sha256(repr(self).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class PerResult:
    """Outcome of one simulated scenario.

    ``packets_sent`` counts every offered packet that was resolved (including
    CSMA channel-access failures, which count as lost); ``rssi_dbm`` is the
    total WLAN power at the 802.15.4 receiver.
    """

    packets_sent: int
    packets_lost: int
    per: float
    rssi_dbm: float
    range_class: RangeClass
    stderr: float

    @classmethod
    def from_counts(cls, sent: int, lost: int, rssi_dbm: float,
                    range_class: RangeClass) -> "PerResult":
        if lost > sent:
            raise ValueError("packets_lost cannot exceed packets_sent")
        if sent == 0:
            return cls(0, 0, 0.0, rssi_dbm, range_class, 0.0)
        per = lost / sent
        return cls(sent, lost, per, rssi_dbm, range_class,
                   math.sqrt(per * (1.0 - per) / sent))


class EventQueue:
    """Future-event queue ordered by (timestamp, insertion sequence)."""

    def __init__(self) -> None:
        self._heap: list = []
        self._seq = 0
        self.now = 0.0
        self._stopped = False

    def push(self, time: float, fn, *args) -> None:
        self._seq += 1
        heapq.heappush(self._heap, (time, self._seq, fn, args))

    def stop(self) -> None:
        self._stopped = True

    def run(self) -> None:
        while self._heap and not self._stopped:
            time, _, fn, args = heapq.heappop(self._heap)
            assert time >= self.now, "event dispatched out of time order"
            self.now = time
            fn(time, *args)


class _WlanNode:
    """Saturated 802.11b sender: contention gap, then one data+SIFS+ACK burst.

    While counting down DIFS + backoff the node freezes whenever it can sense
    an ongoing 802.15.4 emission (range R1); the residual backoff resumes
    after the medium idles for another DIFS. Stale countdown events are
    invalidated through an epoch counter.
    """

    def __init__(self, q: EventQueue, rng: random.Random, gap: IdleGapModel,
                 busy_len_s: float, senses_zigbee: bool, cw_doubling: bool) -> None:
        self.q = q
        self.rng = rng
        self.difs = gap.difs_s
        self.slot = gap.backoff_slot_s
        self.cw_min = gap.cw_min
        self.cw = gap.cw_min
        self.busy_len = busy_len_s
        self.senses_zigbee = senses_zigbee
        self.cw_doubling = cw_doubling
        self.state = "gap"
        self.frozen = False
        self.zigbee_on_air = False
        self.gap_start = 0.0
        self.pending_backoff = 0.0
        self.backoff_rem = 0.0
        self.committed = 0.0
        self.busy_until = 0.0
        self.collided = False
        self.epoch = 0

    def start(self, t: float) -> None:
        self._begin_gap(t)

    def _begin_gap(self, t: float) -> None:
        self.state = "gap"
        self.gap_start = t
        self.pending_backoff = self.rng.randint(0, self.cw) * self.slot
        self.epoch += 1
        if self.zigbee_on_air and self.senses_zigbee:
            self.frozen = True
            self.backoff_rem = self.pending_backoff
        else:
            self.frozen = False
            self.committed = t + self.difs + self.pending_backoff
            self.q.push(self.committed, self._try_transmit, self.epoch)

    def _try_transmit(self, t: float, epoch: int) -> None:
        if epoch != self.epoch or self.state != "gap" or self.frozen:
            return
        self.state = "busy"
        self.busy_until = t + self.busy_len
        self.collided = self.zigbee_on_air
        self.epoch += 1
        self.q.push(self.busy_until, self._busy_end)

    def _busy_end(self, t: float) -> None:
        if self.cw_doubling and self.collided:
            self.cw = min(2 * (self.cw + 1) - 1, _WLAN_CW_MAX)
        else:
            self.cw = self.cw_min
        self._begin_gap(t)

    def on_zigbee_start(self, t: float) -> None:
        self.zigbee_on_air = True
        if self.state == "busy":
            self.collided = True
            return
        if self.senses_zigbee and not self.frozen:
            elapsed = t - self.gap_start
            if elapsed <= self.difs:
                self.backoff_rem = self.pending_backoff
            else:
                self.backoff_rem = self.committed - t
            self.frozen = True
            self.epoch += 1

    def on_zigbee_end(self, t: float) -> None:
        self.zigbee_on_air = False
        if self.frozen:
            # Resume: a fresh DIFS, then the residual backoff.
            self.frozen = False
            self.gap_start = t
            self.pending_backoff = self.backoff_rem
            self.committed = t + self.difs + self.backoff_rem
            self.epoch += 1
            self.q.push(self.committed, self._try_transmit, self.epoch)

    def busy_overlaps(self, t0: float, t1: float) -> bool:
        """Whether any WLAN airtime intersects [t0, t1); t0 must be the current time.

        Exact, not a heuristic: the next transmission start is committed when
        each gap begins, so at time t0 the state plus the committed start
        fully determine occupancy over any future window.
        """
        if self.state == "busy":
            return True
        if self.frozen:
            return False
        return self.committed < t1


class _ZigbeeLink:
    """802.15.4 sender/receiver pair running unslotted CSMA/CA per packet.

    A packet is lost on CSMA channel-access failure, on a WLAN overlap of the
    data frame that fails the SIR test, on a WLAN overlap of the ACK exchange
    (when acknowledgements are enabled) under the same SIR test, or on the
    optional residual-noise draw.
    """

    def __init__(self, q: EventQueue, rng: random.Random, wlan: _WlanNode,
                 timing: FrameTiming, backoff_slot_s: float, senses_wlan: bool,
                 ack_enabled: bool, sir_pass: bool, sir_soft_success: float | None,
                 noise_loss_prob: float) -> None:
        self.q = q
        self.rng = rng
        self.wlan = wlan
        self.timing = timing
        self.airtime = zigbee_frame_airtime(timing)
        self.backoff_slot = backoff_slot_s
        self.senses_wlan = senses_wlan
        self.ack_enabled = ack_enabled
        self.sir_pass = sir_pass
        self.sir_soft_success = sir_soft_success
        self.noise_loss_prob = noise_loss_prob
        self.backlog = 0
        self.serving = False
        self.nb = 0
        self.be = _MIN_BE
        self.sent = 0
        self.lost = 0
        self.on_resolved = None  # callback(t), set by the driver

    def on_arrival(self, t: float) -> None:
        self.backlog += 1
        if not self.serving:
            self.serving = True
            self._start_csma(t)

    def _start_csma(self, t: float) -> None:
        self.nb = 0
        self.be = _MIN_BE
        self._backoff(t)

    def _backoff(self, t: float) -> None:
        delay = self.rng.randint(0, 2 ** self.be - 1) * self.backoff_slot
        self.q.push(t + delay, self._cca_start)

    def _cca_start(self, t: float) -> None:
        busy = self.senses_wlan and self.wlan.busy_overlaps(t, t + self.timing.cca_s)
        self.q.push(t + self.timing.cca_s, self._cca_end, busy)

    def _cca_end(self, t: float, busy: bool) -> None:
        if not busy:
            self._begin_tx(t)
            return
        self.nb += 1
        self.be = min(self.be + 1, _MAX_BE)
        if self.nb > _MAX_CSMA_BACKOFFS:
            self._resolve(t, lost=True)
        else:
            self._backoff(t)

    def _begin_tx(self, t: float) -> None:
        self.wlan.on_zigbee_start(t)
        data_overlap = self.wlan.busy_overlaps(t, t + self.airtime)
        self.q.push(t + self.airtime, self._data_end, data_overlap)

    def _data_end(self, t: float, data_overlap: bool) -> None:
        self.wlan.on_zigbee_end(t)
        if self.ack_enabled:
            self.q.push(t + self.timing.sifs_s, self._ack_start, data_overlap)
        else:
            self._judge(t, data_overlap, False)

    def _ack_start(self, t: float, data_overlap: bool) -> None:
        # ACK frames are sent without carrier sensing.
        self.wlan.on_zigbee_start(t)
        ack_overlap = self.wlan.busy_overlaps(t, t + self.timing.ack_duration_s)
        self.q.push(t + self.timing.ack_duration_s, self._ack_end, data_overlap, ack_overlap)

    def _ack_end(self, t: float, data_overlap: bool, ack_overlap: bool) -> None:
        self.wlan.on_zigbee_end(t)
        self._judge(t, data_overlap, ack_overlap)

    def _judge(self, t: float, data_overlap: bool, ack_overlap: bool) -> None:
        lost = (data_overlap and not self._power_ok()) or \
               (ack_overlap and not self._power_ok())
        if not lost and self.noise_loss_prob > 0.0:
            lost = self.rng.random() < self.noise_loss_prob
        self._resolve(t, lost)

    def _power_ok(self) -> bool:
        if not self.sir_pass:
            return False
        if self.sir_soft_success is None:
            return True
        return self.rng.random() < self.sir_soft_success

    def _resolve(self, t: float, lost: bool) -> None:
        self.sent += 1
        if lost:
            self.lost += 1
        self.backlog -= 1
        if self.on_resolved is not None:
            self.on_resolved(t)
        if self.backlog > 0:
            self._start_csma(t)
        else:
            self.serving = False


def _scenario_ranges(scenario: Scenario):
    return coexistence_ranges(
        scenario.wlan_profile,
        scenario.zigbee_profile,
        scenario.path,
        scenario.sir_threshold_db,
        scenario.effective_shape(),
    )


def classify_range(scenario: Scenario) -> RangeClass:
    """Coexistence range class of the interferer distance.

    Disjoint spectra leave no interference at any distance and classify as
    ``BEYOND``.
    """
    try:
        ranges = _scenario_ranges(scenario)
    except ValueError:
        return RangeClass.BEYOND
    d = scenario.d_interferer_m
    if d <= ranges.r1_m:
        return RangeClass.R1
    if d <= ranges.r2_m:
        return RangeClass.R2
    if d <= ranges.r3_m:
        return RangeClass.R3
    return RangeClass.BEYOND


def link_sir_db(scenario: Scenario) -> float | None:
    """In-band SIR at the 802.15.4 receiver, or None for disjoint spectra."""
    fraction = inband_fraction_db(
        scenario.wlan_profile.center_freq_hz,
        scenario.effective_shape(),
        scenario.zigbee_profile.center_freq_hz,
        scenario.zigbee_profile.bandwidth_hz,
    )
    if fraction is None:
        return None
    signal = received_power_dbm(scenario.zigbee_profile.tx_power_dbm,
                                scenario.d_link_m, scenario.path)
    interference = received_power_dbm(scenario.wlan_profile.tx_power_dbm + fraction,
                                      scenario.d_interferer_m, scenario.path)
    return sir_db(signal, interference)


def _sir_passes(scenario: Scenario) -> bool:
    sir = link_sir_db(scenario)
    return sir is None or sir > scenario.sir_threshold_db


def _wlan_busy_len_s(profile: RadioProfile) -> float:
    return profile.payload_bytes * 8 / profile.bit_rate_bps + profile.sifs_s \
        + profile.ack_duration_s


def _noise_loss_prob(scenario: Scenario, timing: FrameTiming) -> float:
    if scenario.noise_snr_db is None:
        return 0.0
    frame_bits = 8 * (timing.phy_header_bytes + timing.mac_overhead_bytes
                      + timing.payload_bytes)
    ber = ber_from_snr(db_to_linear(scenario.noise_snr_db), OQPSK_2450MHZ)
    return per_from_ber(ber, frame_bits)


def run_simulation(scenario: Scenario) -> PerResult:
    """Simulate one scenario to completion; bit-identical for equal scenarios."""
    range_class = classify_range(scenario)
    timing = scenario.effective_frame_timing()
    rssi = received_power_dbm(scenario.wlan_profile.tx_power_dbm,
                              scenario.d_interferer_m, scenario.path)

    q = EventQueue()
    wlan = _WlanNode(
        q,
        random.Random(derive_child_seed(scenario.seed, 0)),
        IdleGapModel.from_profile(scenario.wlan_profile),
        _wlan_busy_len_s(scenario.wlan_profile),
        senses_zigbee=(range_class is RangeClass.R1),
        cw_doubling=scenario.wlan_cw_doubling,
    )
    link = _ZigbeeLink(
        q,
        random.Random(derive_child_seed(scenario.seed, 1)),
        wlan,
        timing,
        backoff_slot_s=scenario.zigbee_profile.backoff_slot_s,
        senses_wlan=(range_class in (RangeClass.R1, RangeClass.R2)),
        ack_enabled=scenario.ack_enabled,
        sir_pass=_sir_passes(scenario),
        sir_soft_success=scenario.sir_soft_success,
        noise_loss_prob=_noise_loss_prob(scenario, timing),
    )

    wlan.start(0.0)
    if scenario.offered_load == SATURATED:
        def refill(t: float) -> None:
            if t < scenario.duration_s:
                link.on_arrival(t)
            else:
                q.stop()

        link.on_resolved = refill
        link.on_arrival(0.0)
    else:
        total = math.ceil(scenario.duration_s * scenario.offered_load)

        def check_done(t: float) -> None:
            if link.sent >= total:
                q.stop()

        link.on_resolved = check_done
        for i in range(total):
            q.push(i / scenario.offered_load, link.on_arrival)
    q.run()

    return PerResult.from_counts(link.sent, link.lost, rssi, range_class)


def sweep_distance(base: Scenario, distances: list[float]) -> list[tuple[float, PerResult]]:
    """Run one simulation per interferer distance with derived child seeds."""
    if not distances:
        raise ValueError("distances must be non-empty")
    rows = []
    for i, d in enumerate(distances):
        child = replace(base, d_interferer_m=d, seed=derive_child_seed(base.seed, i))
        rows.append((d, run_simulation(child)))
    return rows


def sweep_offset(base: Scenario, offsets_hz: list[float]) -> list[tuple[float, PerResult]]:
    """Run one simulation per channel offset of the 802.15.4 center frequency.

    Each offset re-centres the victim channel at the WLAN center plus the
    offset; distance and all other parameters stay fixed.
    """
    if not offsets_hz:
        raise ValueError("offsets_hz must be non-empty")
    rows = []
    for i, off in enumerate(offsets_hz):
        zigbee = replace(base.zigbee_profile,
                         center_freq_hz=base.wlan_profile.center_freq_hz + off)
        child = replace(base, zigbee_profile=zigbee,
                        seed=derive_child_seed(base.seed, i))
        rows.append((off, run_simulation(child)))
    return rows


def predict_per(scenario: Scenario) -> float:
    """Closed-form PER prediction for the scenario (per transmission attempt).

    Uses the alternating-renewal success probability of
    :func:`coexsim.mac_timing.analytic_success_probability`; exact for blind
    R3 transmissions, a per-attempt (no CSMA retries) approximation in R1/R2.
    """
    range_class = classify_range(scenario)
    timing = scenario.effective_frame_timing()
    success = analytic_success_probability(
        range_class,
        _wlan_busy_len_s(scenario.wlan_profile),
        IdleGapModel.from_profile(scenario.wlan_profile),
        timing,
        power_pass=_sir_passes(scenario),
        ack_enabled=scenario.ack_enabled,
    )
    success *= 1.0 - _noise_loss_prob(scenario, timing)
    return 1.0 - success
