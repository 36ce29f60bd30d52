"""Seeded Monte Carlo engine.

Trial ``t`` draws everything from its own generator, seeded by
``SeedSequence(master_seed, spawn_key=(t,))``. Sweep points reuse the same
per-trial generators (common random numbers), so differences between sweep
points can be judged with paired confidence intervals. Trials are grouped
in fixed-size chunks that may run on a thread pool; results are stitched back
in trial order before any reduction, so the thread count never changes a bit
of the output.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal, Sequence

import numpy as np

from chaos_swipt.channel import ChannelProfile, Combining, apply_channel, draw_realization
from chaos_swipt.chaosgen import (
    HenonParams,
    LorenzParams,
    chebyshev_sequence,
    henon_trajectory,
    lorenz_trajectory,
    multisine_waveform,
)
from chaos_swipt.dcsk import FrameGeometry, build_frame, reference_chips, validate_geometry
from chaos_swipt.errors import DivergenceError, DomainError, TrialError
from chaos_swipt.harvester import EhModelParams, harvested_dc
from chaos_swipt.receivers import (
    RisConfig,
    SimoSplit,
    WptReceiverConfig,
    ris_swipt_link,
    simo_swipt_receive,
    wpt_receive,
)

Scenario = Literal["wpt_waveform", "wpt_dcsk", "swipt_simo", "swipt_ris"]
System = Literal["lorenz", "henon", "multisine", "chebyshev"]

Z95 = 1.959963984540054
CHUNK = 1024


@dataclass(frozen=True)
class WaveformConfig:
    system: System = "lorenz"
    lorenz: LorenzParams = LorenzParams()
    henon: HenonParams = HenonParams()
    lorenz_init: tuple[float, float, float] = (-1.0, -2.0, 1.5)
    henon_init: tuple[float, float] = (-0.2, -2.0)
    init_jitter: float = 0.05  # std of the per-trial Gaussian offset of the start point
    dt: float = 0.01
    window: int = 4096
    transient: int = 1000
    tones: int = 4
    samples_per_period: int = 64
    normalize: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: Scenario = "wpt_dcsk"
    waveform: WaveformConfig = WaveformConfig()
    geometry: FrameGeometry = FrameGeometry(40, 1)
    profile: ChannelProfile = ChannelProfile.flat()
    split: SimoSplit = SimoSplit(5, 1, 4)
    ris: RisConfig | None = None
    eh_model: EhModelParams = EhModelParams()
    correlator: bool = True
    combining: Combining = "per_path"
    eh_noise: bool = False  # harvest from the noise-free faded signal by default
    trials: int = 100_000
    master_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise DomainError("master_seed must be a 64-bit unsigned value")
        if self.scenario == "swipt_ris":
            if self.ris is None:
                raise DomainError("swipt_ris needs a RisConfig")
            if self.ris.geometry != self.geometry:
                raise DomainError("RisConfig geometry differs from the experiment geometry")
            if self.profile.n_paths != 1:
                raise DomainError("RIS hops are modelled as flat channels")

    def replace(self, **changes) -> ExperimentConfig:
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class EstimateReport:
    mean: float
    ci95: float
    n_trials: int
    seed: int
    lower: float
    upper: float


@dataclass(frozen=True)
class TrialResults:
    """Per-trial outputs in trial order; ``errors`` only for scenarios with an IT path."""

    config: ExperimentConfig
    i_eta: np.ndarray
    errors: np.ndarray | None = None
    harvested_w: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.i_eta.size

    @cached_property
    def i_eta_report(self) -> EstimateReport:
        return mean_report(self.i_eta, self.config.master_seed)

    @cached_property
    def ber_report(self) -> EstimateReport:
        if self.errors is None:
            raise DomainError(f"scenario {self.config.scenario} has no information path")
        return wilson_report(int(self.errors.sum()), self.n, self.config.master_seed)


@dataclass(frozen=True)
class TradeoffPoint:
    phi: int
    sr: float
    sr_ci95: float
    i_eta_mean: float
    i_eta_ci95: float
    results: TrialResults | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class ChannelSweepRow:
    rician_k: float
    omega: tuple[float, ...]
    i_eta: EstimateReport
    sr: float | None = None
    sr_ci95: float | None = None
    results: TrialResults | None = field(default=None, repr=False, compare=False)


# ---------------------------------------------------------------------------
# statistics


def mean_report(samples, seed: int = 0) -> EstimateReport:
    x = np.asarray(samples, dtype=float)
    m = float(np.mean(x))
    ci = Z95 * float(np.std(x, ddof=1)) / math.sqrt(x.size) if x.size > 1 else 0.0
    return EstimateReport(m, ci, int(x.size), seed, m - ci, m + ci)


def wilson_report(errors: int, n: int, seed: int = 0) -> EstimateReport:
    """Error rate with the Wilson score 95% interval; ``ci95`` is its half-width."""
    p = errors / n
    z2 = Z95 * Z95
    centre = (p + z2 / (2 * n)) / (1 + z2 / n)
    half = Z95 * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n)
    lower = 0.0 if errors == 0 else max(0.0, centre - half)
    upper = 1.0 if errors == n else min(1.0, centre + half)
    return EstimateReport(p, half, n, seed, lower, upper)


def paired_difference(a, b, seed: int = 0) -> EstimateReport:
    """Mean of ``a - b`` over common-random-number trials, normal 95% CI."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DomainError("paired samples must have equal length")
    return mean_report(a - b, seed)


# ---------------------------------------------------------------------------
# trials


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial,)))


def _draw_frame(cfg: ExperimentConfig, rng: np.random.Generator):
    bit = 1 if rng.integers(2) else -1
    chip_seed = int(rng.integers(2**63))
    return build_frame(reference_chips(chip_seed, 0, cfg.geometry.phi), bit, cfg.geometry)


def _waveform_window(w: WaveformConfig, rng: np.random.Generator, cache: dict) -> np.ndarray:
    n = w.transient + w.window
    if w.system == "lorenz":
        init = np.asarray(w.lorenz_init) + w.init_jitter * rng.standard_normal(3)
        x = lorenz_trajectory(w.lorenz, init, w.dt, n - 1).x
    elif w.system == "henon":
        init = np.asarray(w.henon_init) + w.init_jitter * rng.standard_normal(2)
        x = henon_trajectory(w.henon, init, n - 1).x
    elif w.system == "chebyshev":
        x = chebyshev_sequence(rng.uniform(-1.0, 1.0), n)
    elif w.system == "multisine":
        if "multisine" not in cache:
            periods = -(-w.window // w.samples_per_period)
            s = multisine_waveform(w.tones, w.samples_per_period, periods)
            cache["multisine"] = s.samples[: w.window]
        x = None
    else:
        raise DomainError(f"unknown waveform system {w.system!r}")
    if x is None:
        window = cache["multisine"]
    else:
        window = x.samples[w.transient :]
    if w.normalize:
        p = float(np.mean(window * window))
        if p == 0.0:
            raise DomainError("cannot normalize an all-zero window")
        window = window / math.sqrt(p)
    return window


def _trial(cfg: ExperimentConfig, t: int, cache: dict):
    """Returns ``(i_eta, bit_error or -1, harvested_w or nan)``."""
    rng = trial_rng(cfg.master_seed, t)
    beta = cfg.geometry.spreading_beta
    prof = cfg.profile

    if cfg.scenario == "wpt_waveform":
        s = _waveform_window(cfg.waveform, rng, cache)
        real = draw_realization(prof, rng)
        r = apply_channel(s, real, rng, add_noise=cfg.eh_noise, combining=cfg.combining)
        return harvested_dc(r, cfg.eh_model).i_eta, -1, math.nan

    frame = _draw_frame(cfg, rng)

    if cfg.scenario == "wpt_dcsk":
        real = draw_realization(prof, rng)
        r = apply_channel(
            frame.chips, real, rng,
            reference_energy=beta, add_noise=cfg.eh_noise, combining=cfg.combining,
        )
        rx = WptReceiverConfig(cfg.geometry, cfg.correlator, cfg.eh_model)
        return wpt_receive(r, rx).i_eta, -1, math.nan

    if cfg.scenario == "swipt_simo":
        split = cfg.split
        reals = [draw_realization(prof, rng) for _ in range(split.n_antennas)]
        branches = []
        for a, real in enumerate(reals):
            is_eh = a < split.m_eh
            branches.append(
                apply_channel(
                    frame.chips, real, rng,
                    reference_energy=beta,
                    add_noise=cfg.eh_noise if is_eh else True,
                    combining=cfg.combining if is_eh else "per_path",
                )
            )
        out = simo_swipt_receive(branches, split, cfg.geometry, cfg.eh_model)
        err = int(out.bits_estimated[0] != frame.bit) if out.bits_estimated else -1
        return out.i_eta, err, math.nan

    if cfg.scenario == "swipt_ris":
        ris = cfg.ris
        n = ris.n_elements
        h1 = np.array([draw_realization(prof, rng).taps[0] for _ in range(n)])
        # forward channels drawn for every element so M sweeps stay paired
        h2 = np.array([draw_realization(prof, rng).taps[0] for _ in range(n)])
        out, sus = ris_swipt_link(frame, ris, h1, h2[ris.m_eh :], rng)
        err = int(out.bits_estimated[0] != frame.bit) if out.bits_estimated else -1
        return out.i_eta, err, sus.harvested_power_w

    raise DomainError(f"unknown scenario {cfg.scenario!r}")


def _run_chunk(cfg: ExperimentConfig, start: int, stop: int) -> np.ndarray:
    cache: dict = {}
    out = np.empty((stop - start, 3))
    for t in range(start, stop):
        try:
            out[t - start] = _trial(cfg, t, cache)
        except (DomainError, DivergenceError) as exc:
            raise TrialError(t, exc) from exc
    return out


def simulate(config: ExperimentConfig, threads: int = 1) -> TrialResults:
    """Run every trial of ``config`` and return per-trial outputs in trial order."""
    if threads < 1:
        raise DomainError("threads must be >= 1")
    bounds = [(s, min(s + CHUNK, config.trials)) for s in range(0, config.trials, CHUNK)]
    if threads == 1 or len(bounds) == 1:
        parts = [_run_chunk(config, a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ab: _run_chunk(config, *ab), bounds))
    table = np.concatenate(parts)
    errors = table[:, 1]
    harvested = table[:, 2]
    return TrialResults(
        config,
        table[:, 0].copy(),
        None if np.all(errors < 0) else (errors > 0),
        None if np.all(np.isnan(harvested)) else harvested.copy(),
    )


# ---------------------------------------------------------------------------
# experiments


def run_wpt_experiment(config: ExperimentConfig, threads: int = 1) -> EstimateReport:
    if config.scenario not in ("wpt_waveform", "wpt_dcsk"):
        raise DomainError(f"run_wpt_experiment does not handle {config.scenario}")
    return simulate(config, threads).i_eta_report


def estimate_ber(config: ExperimentConfig, threads: int = 1) -> EstimateReport:
    """BER with a Wilson 95% interval; the success rate is ``1 - mean``."""
    if config.scenario not in ("swipt_simo", "swipt_ris"):
        raise DomainError(f"{config.scenario} has no information path")
    return simulate(config, threads).ber_report


def _tradeoff(phi: int, res: TrialResults, keep: bool) -> TradeoffPoint:
    ie = res.i_eta_report
    if res.errors is None:
        sr, sr_ci = 1.0, 0.0
    else:
        ber = res.ber_report
        sr, sr_ci = 1.0 - ber.mean, ber.ci95
    return TradeoffPoint(phi, sr, sr_ci, ie.mean, ie.ci95, res if keep else None)


def _with_geometry(config: ExperimentConfig, geometry: FrameGeometry) -> ExperimentConfig:
    ris = config.ris
    if ris is not None:
        ris = dataclasses.replace(ris, geometry=geometry)
    return config.replace(geometry=geometry, ris=ris)


def run_phi_sweep(
    config: ExperimentConfig, phis: Sequence[int], threads: int = 1, keep_samples: bool = False
) -> list[TradeoffPoint]:
    """One trade-off point per ``phi``; every point reuses the same trial streams."""
    if config.scenario == "wpt_waveform":
        raise DomainError("a phi sweep needs a DCSK scenario")
    beta = config.geometry.spreading_beta
    geometries = [validate_geometry(beta, int(p)) for p in phis]
    return [
        _tradeoff(g.phi, simulate(_with_geometry(config, g), threads), keep_samples)
        for g in geometries
    ]


def run_channel_sweep(
    config: ExperimentConfig,
    rician_ks: Sequence[float],
    omega_profiles: Sequence[Sequence[float]],
    threads: int = 1,
    keep_samples: bool = False,
) -> list[ChannelSweepRow]:
    """Grid over Rician K (outer) and power-delay profile (inner)."""
    base = config.profile
    profiles = [
        [ChannelProfile(tuple(om), None, float(k), base.gamma0_db) for om in omega_profiles]
        for k in rician_ks
    ]
    rows = []
    for k, row in zip(rician_ks, profiles):
        for prof in row:
            res = simulate(config.replace(profile=prof), threads)
            sr = sr_ci = None
            if res.errors is not None:
                ber = res.ber_report
                sr, sr_ci = 1.0 - ber.mean, ber.ci95
            rows.append(
                ChannelSweepRow(float(k), prof.path_gains, res.i_eta_report, sr, sr_ci,
                                res if keep_samples else None)
            )
    return rows
