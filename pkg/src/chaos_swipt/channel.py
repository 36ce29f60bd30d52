"""Block-fading channels: AWGN, Rayleigh, Rician-K and L-path frequency selective.

Chips are real. Taps are drawn complex; how the complex taps act on the real
chip stream is set by ``combining``:

``"per_path"`` (default)
    each path contributes its envelope ``|h_i|``, i.e. every path is phase
    aligned. This is the usual real-baseband multipath model for DCSK.
``"strongest"``
    real part after removing the phase of the strongest tap only.
``"envelope"``
    magnitude of the complex superposition (EH use only: the sign is lost).

Noise is white Gaussian with per-chip variance ``reference_energy / (2 * gamma0)``.
Passing the spreading factor as ``reference_energy`` makes ``gamma0`` the ratio of
the data-segment energy to ``N0`` at unit chip power, independent of ``phi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from chaos_swipt.errors import DomainError

Combining = Literal["per_path", "strongest", "envelope"]


@dataclass(frozen=True)
class ChannelProfile:
    path_gains: tuple[float, ...] = (1.0,)
    path_delays_chips: tuple[int, ...] | None = None
    rician_k: float = 0.0
    gamma0_db: float = 10.0

    def __post_init__(self):
        gains = tuple(float(g) for g in self.path_gains)
        if not gains:
            raise DomainError("at least one path is required")
        if any(g < 0 or not math.isfinite(g) for g in gains):
            raise DomainError(f"path gains must be finite and non-negative: {gains}")
        if abs(sum(gains) - 1.0) > 1e-12:
            raise DomainError(f"path gains must sum to 1, got {sum(gains)!r}")
        delays = self.path_delays_chips
        delays = tuple(range(len(gains))) if delays is None else tuple(int(d) for d in delays)
        if len(delays) != len(gains):
            raise DomainError("one delay per path is required")
        if delays[0] != 0 or any(b <= a for a, b in zip(delays, delays[1:])):
            raise DomainError(f"delays must start at 0 and strictly increase: {delays}")
        if not (self.rician_k >= 0):
            raise DomainError(f"Rician K must be >= 0, got {self.rician_k}")
        if math.isnan(self.gamma0_db):
            raise DomainError("gamma0_db is NaN")
        object.__setattr__(self, "path_gains", gains)
        object.__setattr__(self, "path_delays_chips", delays)

    @classmethod
    def flat(cls, rician_k=0.0, gamma0_db=10.0) -> ChannelProfile:
        return cls((1.0,), (0,), rician_k, gamma0_db)

    @property
    def n_paths(self) -> int:
        return len(self.path_gains)

    @property
    def gamma0(self) -> float:
        return 10.0 ** (self.gamma0_db / 10.0)

    @property
    def noiseless(self) -> bool:
        return self.gamma0_db == math.inf


@dataclass(frozen=True)
class ChannelRealization:
    taps: np.ndarray
    profile: ChannelProfile = field(repr=False)


def rician_taps(gains, rician_k: float, scatter: np.ndarray) -> np.ndarray:
    """Taps from unit complex Gaussians ``scatter``; the LOS part has zero phase."""
    gains = np.sqrt(np.asarray(gains, dtype=float))
    if rician_k == math.inf:
        return gains.astype(complex)
    los = math.sqrt(rician_k / (rician_k + 1.0))
    nlos = math.sqrt(1.0 / (rician_k + 1.0))
    return gains * (los + nlos * scatter)


def draw_realization(profile: ChannelProfile, rng: np.random.Generator) -> ChannelRealization:
    # always consume 2L normals so paired runs stay aligned across K values
    z = rng.standard_normal((profile.n_paths, 2))
    scatter = (z[:, 0] + 1j * z[:, 1]) / math.sqrt(2.0)
    return ChannelRealization(rician_taps(profile.path_gains, profile.rician_k, scatter), profile)


def noise_std(gamma0_db: float, reference_energy: float = 1.0) -> float:
    if gamma0_db == math.inf:
        return 0.0
    return math.sqrt(reference_energy / (2.0 * 10.0 ** (gamma0_db / 10.0)))


def _delayed(signal: np.ndarray, delay: int) -> np.ndarray:
    if delay == 0:
        return signal
    out = np.zeros_like(signal)
    if delay < signal.size:
        out[delay:] = signal[: signal.size - delay]
    return out


def faded(signal, realization: ChannelRealization, combining: Combining = "per_path") -> np.ndarray:
    """Noise-free channel output, same length as the input (tail truncated)."""
    s = np.asarray(signal, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise DomainError("signal must be a non-empty 1-D sequence")
    taps = realization.taps
    delays = realization.profile.path_delays_chips
    if combining == "per_path":
        out = np.zeros_like(s)
        for h, d in zip(np.abs(taps), delays):
            out += h * _delayed(s, d)
        return out
    r = np.zeros(s.size, dtype=complex)
    for h, d in zip(taps, delays):
        r += h * _delayed(s, d)
    if combining == "strongest":
        lead = taps[int(np.argmax(np.abs(taps)))]
        return (r * np.exp(-1j * np.angle(lead))).real
    if combining == "envelope":
        return np.abs(r)
    raise DomainError(f"unknown combining mode {combining!r}")


def apply_channel(
    signal,
    realization: ChannelRealization,
    rng: np.random.Generator | None = None,
    *,
    reference_energy: float = 1.0,
    add_noise: bool = True,
    combining: Combining = "per_path",
) -> np.ndarray:
    """``r[n] = sum_i h_i s[n - d_i] + w[n]`` over one block."""
    out = faded(signal, realization, combining)
    sd = noise_std(realization.profile.gamma0_db, reference_energy)
    if add_noise and sd > 0:
        if rng is None:
            raise DomainError("a random generator is required when noise is on")
        out = out + sd * rng.standard_normal(out.size)
    return out
