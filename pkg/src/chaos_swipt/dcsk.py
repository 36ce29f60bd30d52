"""Short-reference DCSK modem.

A symbol is a length-``phi`` Chebyshev reference followed by ``spreading_beta``
chips holding the bit times the reference repeated ``spreading_beta // phi``
times. ``phi == spreading_beta`` is plain DCSK.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chaos_swipt.chaosgen import chebyshev_sequence
from chaos_swipt.errors import DomainError


@dataclass(frozen=True)
class FrameGeometry:
    spreading_beta: int
    phi: int

    def __post_init__(self):
        _check_geometry(self.spreading_beta, self.phi)

    @property
    def length(self) -> int:
        return self.spreading_beta + self.phi

    @property
    def repeats(self) -> int:
        return self.spreading_beta // self.phi


def _check_geometry(spreading_beta, phi):
    for name, v in (("spreading_beta", spreading_beta), ("phi", phi)):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise DomainError(f"{name} must be an integer, got {v!r}")
    if phi < 1 or spreading_beta < 1:
        raise DomainError(f"spreading_beta and phi must be >= 1, got ({spreading_beta}, {phi})")
    if phi > spreading_beta:
        raise DomainError(f"phi={phi} exceeds spreading_beta={spreading_beta}")
    if spreading_beta % phi:
        raise DomainError(f"{phi} does not divide {spreading_beta}")


def validate_geometry(spreading_beta, phi) -> FrameGeometry:
    """Accept iff 1 <= phi <= spreading_beta and phi divides spreading_beta."""
    return FrameGeometry(spreading_beta, phi)


@dataclass(frozen=True)
class SrDcskFrame:
    geometry: FrameGeometry
    bit: int
    chips: np.ndarray

    @property
    def reference(self) -> np.ndarray:
        return self.chips[: self.geometry.phi]

    @property
    def data(self) -> np.ndarray:
        return self.chips[self.geometry.phi :]


@dataclass(frozen=True)
class DecisionRecord:
    statistic: float
    bit_estimate: int
    symbol_index: int = 0


def reference_init(chip_seed: int, symbol_index: int) -> float:
    """Chebyshev starting point for one symbol, in the open interval (-1, 1)."""
    word = int(np.random.SeedSequence([int(chip_seed), int(symbol_index)]).generate_state(1)[0])
    return (word + 0.5) / 2.0**31 - 1.0


def reference_chips(chip_seed: int, symbol_index: int, phi: int) -> np.ndarray:
    return chebyshev_sequence(reference_init(chip_seed, symbol_index), phi).samples


def build_frame(reference, bit: int, geometry: FrameGeometry) -> SrDcskFrame:
    ref = np.asarray(reference, dtype=float)
    if ref.size != geometry.phi:
        raise DomainError(f"reference has {ref.size} chips, geometry wants {geometry.phi}")
    if bit not in (1, -1):
        raise DomainError(f"bits must be +1 or -1, got {bit!r}")
    energy = float(ref @ ref)
    if energy == 0.0:
        raise DomainError("all-zero reference")
    # data segment repeats the reference, so frame power == reference power
    ref = ref * math.sqrt(geometry.phi / energy)
    chips = np.concatenate([ref, bit * np.tile(ref, geometry.repeats)])
    chips.setflags(write=False)
    return SrDcskFrame(geometry, int(bit), chips)


def modulate(bits, geometry: FrameGeometry, chip_seed: int, first_index: int = 0) -> list[SrDcskFrame]:
    """One frame per bit, each with its own reference drawn from ``(chip_seed, index)``."""
    bits = list(bits)
    if not bits:
        raise DomainError("no bits to modulate")
    return [
        build_frame(reference_chips(chip_seed, first_index + l, geometry.phi), b, geometry)
        for l, b in enumerate(bits)
    ]


def correlate(received, geometry: FrameGeometry) -> float:
    r = np.asarray(received, dtype=float)
    if r.shape[-1] != geometry.length:
        raise DomainError(f"received frame has {r.shape[-1]} chips, expected {geometry.length}")
    ref = r[..., : geometry.phi]
    data = r[..., geometry.phi :].reshape(*r.shape[:-1], geometry.repeats, geometry.phi)
    return np.einsum("...j,...kj->...", ref, data)


def demodulate(received, geometry: FrameGeometry, symbol_index: int = 0) -> DecisionRecord:
    stat = float(correlate(received, geometry))
    return DecisionRecord(stat, 1 if stat >= 0 else -1, symbol_index)
