"""Receiver architectures built from the modem, channel and harvester.

* ``wpt_receive``: analog correlator (window ``beta + phi``) in front of the EH unit.
* ``simo_swipt_receive``: N antennas, M feed the EH chain via a parallel-in
  serial-out register, K are demodulated and their statistics summed.
* ``ris_swipt_link``: self-sustainable RIS; M elements harvest (one correlator
  and EH unit each, currents summed), K elements reflect with aligned phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from chaos_swipt.channel import noise_std
from chaos_swipt.dcsk import FrameGeometry, SrDcskFrame, correlate
from chaos_swipt.errors import DomainError
from chaos_swipt.harvester import EhModelParams, HarvestReport, harvested_dc


@dataclass(frozen=True)
class WptReceiverConfig:
    geometry: FrameGeometry
    correlator_enabled: bool = True
    eh_model: EhModelParams = EhModelParams()

    @property
    def window(self) -> int:
        return self.geometry.length


@dataclass(frozen=True)
class SimoSplit:
    n_antennas: int
    m_eh: int
    k_it: int

    def __post_init__(self):
        if self.n_antennas < 1 or self.m_eh < 0 or self.k_it < 0:
            raise DomainError("need N >= 1 and M, K >= 0")
        if self.m_eh + self.k_it != self.n_antennas:
            raise DomainError(f"M + K must equal N: {self.m_eh} + {self.k_it} != {self.n_antennas}")


@dataclass(frozen=True)
class RisConfig:
    n_elements: int
    m_eh: int
    k_it: int
    geometry: FrameGeometry
    per_element_power_w: float = 0.0
    controller_power_w: float = 0.0
    eh_model: EhModelParams = EhModelParams()
    gamma0_db: float = 10.0

    def __post_init__(self):
        SimoSplit(self.n_elements, self.m_eh, self.k_it)
        for name in ("per_element_power_w", "controller_power_w"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class SwiptOutcome:
    bits_estimated: list[int]
    i_eta: float
    statistic: float | None = None
    per_branch: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SustainabilityReport:
    harvested_power_w: float
    consumed_power_w: float
    margin_w: float
    passed: bool


def analog_correlate(signal, window_len: int) -> np.ndarray:
    """Valid-mode sliding sums: ``window_len - 1`` delay blocks and an adder."""
    s = np.asarray(signal, dtype=float)
    if window_len < 1:
        raise DomainError("window_len must be >= 1")
    if s.size < window_len:
        raise DomainError(f"window of {window_len} is longer than the {s.size}-chip signal")
    if window_len == 1:
        return s.copy()
    return np.lib.stride_tricks.sliding_window_view(s, window_len).sum(axis=1)


def wpt_receive(received, config: WptReceiverConfig) -> HarvestReport:
    r = np.asarray(received, dtype=float)
    if r.size < config.window:
        raise DomainError(f"need at least one {config.window}-chip frame, got {r.size} chips")
    if config.correlator_enabled:
        r = analog_correlate(r, config.window)
    return harvested_dc(r, config.eh_model)


def piso_serialize(branches) -> np.ndarray:
    """Chip-major, antenna-minor interleave: ``out[n*M + m] = branches[m][n]``."""
    b = np.asarray(branches, dtype=float)
    return b.T.reshape(-1)


def simo_swipt_receive(
    per_antenna_received,
    split: SimoSplit,
    geometry: FrameGeometry,
    eh_model: EhModelParams = EhModelParams(),
) -> SwiptOutcome:
    """Antennas ``0..M-1`` harvest, antennas ``M..N-1`` decode."""
    branches = [np.asarray(b, dtype=float) for b in per_antenna_received]
    if len(branches) != split.n_antennas:
        raise DomainError(f"expected {split.n_antennas} branches, got {len(branches)}")
    if any(b.shape != (geometry.length,) for b in branches):
        raise DomainError(f"every branch must hold one aligned {geometry.length}-chip frame")
    eh, it = branches[: split.m_eh], branches[split.m_eh :]

    i_eta, papr = 0.0, None
    if eh:
        report = wpt_receive(piso_serialize(eh), WptReceiverConfig(geometry, True, eh_model))
        i_eta, papr = report.i_eta, report.papr

    bits, stat, per = [], None, []
    if it:
        per = [float(correlate(b, geometry)) for b in it]
        stat = math.fsum(per)
        bits = [1 if stat >= 0 else -1]
    return SwiptOutcome(bits, i_eta, stat, {"it_statistics": per, "eh_papr": papr})


def ris_phases(incident, forward) -> np.ndarray:
    """Reflection phases cancelling each cascaded channel phase."""
    return -np.angle(np.asarray(incident) * np.asarray(forward))


def cascaded_gain(incident, forward, phases) -> complex:
    return complex(np.sum(np.asarray(incident) * np.asarray(forward) * np.exp(1j * np.asarray(phases))))


def sustainability_check(harvest: HarvestReport | float, config: RisConfig) -> SustainabilityReport:
    i_eta = harvest.i_eta if isinstance(harvest, HarvestReport) else float(harvest)
    harvested = i_eta * i_eta * config.eh_model.load_resistance
    consumed = config.k_it * config.per_element_power_w + config.controller_power_w
    return SustainabilityReport(harvested, consumed, harvested - consumed, harvested >= consumed)


def ris_swipt_link(
    frame: SrDcskFrame,
    config: RisConfig,
    incident_channels,
    forward_channels,
    rng: np.random.Generator | None = None,
) -> tuple[SwiptOutcome, SustainabilityReport]:
    """One frame through the RIS; there is no direct transmitter-receiver path.

    Elements ``0..M-1`` of ``incident_channels`` feed the EH section, elements
    ``M..N-1`` pair with ``forward_channels`` in the IT section.
    """
    h1 = np.asarray(incident_channels, dtype=complex)
    h2 = np.asarray(forward_channels, dtype=complex)
    if h1.shape != (config.n_elements,):
        raise DomainError(f"expected {config.n_elements} incident channels, got {h1.shape}")
    if h2.shape != (config.k_it,):
        raise DomainError(f"expected {config.k_it} forward channels, got {h2.shape}")
    if frame.geometry != config.geometry:
        raise DomainError("frame geometry does not match the RIS configuration")
    s = frame.chips
    rx = WptReceiverConfig(config.geometry, True, config.eh_model)

    currents = [wpt_receive(abs(h) * s, rx).i_eta for h in h1[: config.m_eh]]
    i_eta = math.fsum(currents)

    bits, stat = [], None
    if config.k_it:
        g1 = h1[config.m_eh :]
        amp = abs(cascaded_gain(g1, h2, ris_phases(g1, h2)))
        r = amp * s
        sd = noise_std(config.gamma0_db, config.geometry.spreading_beta)
        if sd > 0:
            if rng is None:
                raise DomainError("a random generator is required when noise is on")
            r = r + sd * rng.standard_normal(r.size)
        stat = float(correlate(r, config.geometry))
        bits = [1 if stat >= 0 else -1]

    outcome = SwiptOutcome(bits, i_eta, stat, {"element_currents": currents})
    return outcome, sustainability_check(i_eta, config)
