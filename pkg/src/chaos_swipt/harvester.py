"""Rectenna model: truncated 4th-order diode expansion, plus PAPR."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chaos_swipt.errors import DomainError


@dataclass(frozen=True)
class EhModelParams:
    k2: float = 0.0034  # A/V^2
    k4: float = 0.3829  # A/V^4
    load_resistance: float = 5000.0  # ohm

    def __post_init__(self):
        if not (self.k2 >= 0 and self.k4 >= 0 and math.isfinite(self.k2) and math.isfinite(self.k4)):
            raise DomainError("k2 and k4 must be finite and non-negative")
        if not (self.load_resistance > 0 and math.isfinite(self.load_resistance)):
            raise DomainError("load_resistance must be positive")


@dataclass(frozen=True)
class HarvestReport:
    i_eta: float
    papr: float
    mean_power: float
    fourth_moment: float


def _samples(signal) -> np.ndarray:
    s = np.asarray(getattr(signal, "samples", signal), dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise DomainError("signal must be a non-empty 1-D sequence")
    return s


def papr(signal) -> float:
    s2 = _samples(signal) ** 2
    m2 = float(np.mean(s2))
    if m2 == 0.0:
        raise DomainError("PAPR undefined for an all-zero signal")
    return float(np.max(s2)) / m2


def harvested_dc(signal, model: EhModelParams = EhModelParams()) -> HarvestReport:
    """DC output ``k2*E[s^2] + k4*E[s^4]`` over the given samples.

    PAPR is reported as 1 for an all-zero input (nothing to harvest either way).
    """
    s = _samples(signal)
    s2 = s * s
    m2 = float(np.mean(s2))
    m4 = float(np.mean(s2 * s2))
    peak = papr(s) if m2 > 0 else 1.0
    return HarvestReport(
        i_eta=model.k2 * m2 + model.k4 * m4, papr=peak, mean_power=m2, fourth_moment=m4
    )
