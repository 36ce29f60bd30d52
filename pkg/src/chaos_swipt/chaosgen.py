"""Chaotic signal sources: Lorenz flow, Henon map, Chebyshev chips, multisine baseline.

Lorenz and Henon state tracks are returned raw; call ``ChipSequence.normalized``
before feeding them to the modem or the harvester so that every waveform
family is compared at unit mean power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numba
import numpy as np

from chaos_swipt.errors import DivergenceError, DomainError

Source = Literal["lorenz_x", "henon_x", "chebyshev", "multisine"]
Stability = Literal["stable", "unstable", "marginal"]

MAX_DT = 0.05
MARGINAL_TOL = 1e-6
HENON_BOUND = 1e6


@dataclass(frozen=True)
class ChipSequence:
    samples: np.ndarray
    source: Source
    mean_power: float = field(init=False)

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 1:
            raise DomainError("a chip sequence needs at least one sample")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "mean_power", float(np.mean(s * s)))

    def __len__(self):
        return self.samples.size

    def normalized(self) -> ChipSequence:
        """Rescale to unit mean power."""
        if self.mean_power == 0.0:
            raise DomainError("cannot normalize an all-zero sequence")
        return ChipSequence(self.samples / math.sqrt(self.mean_power), self.source)


@dataclass(frozen=True)
class LorenzParams:
    sigma: float = 10.0
    r: float = 28.0
    lorenz_beta: float = 8.0 / 3.0

    def __post_init__(self):
        for name in ("sigma", "r", "lorenz_beta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite number, got {v}")


@dataclass(frozen=True)
class HenonParams:
    gamma: float = 0.96
    delta: float = 0.2

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and math.isfinite(self.delta)):
            raise DomainError("Henon parameters must be finite")


@dataclass(frozen=True)
class Trajectory:
    """Full state track (one row per step) and its transmitted x component."""

    states: np.ndarray
    x: ChipSequence


@dataclass(frozen=True)
class EquilibriumReport:
    points: list[np.ndarray]
    classifications: list[Stability]
    # real parts (flows) or moduli (maps) of the Jacobian eigenvalues, per point
    eigen_values: list[np.ndarray]
    note: str = ""


# ---------------------------------------------------------------------------
# Lorenz


def lorenz_rhs(state, params: LorenzParams) -> np.ndarray:
    x, y, z = state
    return np.array(
        [
            params.sigma * (y - x),
            x * (params.r - z) - y,
            x * y - params.lorenz_beta * z,
        ]
    )


@numba.njit(cache=True)
def _lorenz_rk4(x, y, z, sigma, r, b, dt, n_steps):
    out = np.empty((n_steps + 1, 3))
    out[0, 0] = x
    out[0, 1] = y
    out[0, 2] = z
    h2 = 0.5 * dt
    for i in range(n_steps):
        k1x = sigma * (y - x)
        k1y = x * (r - z) - y
        k1z = x * y - b * z
        ax = x + h2 * k1x
        ay = y + h2 * k1y
        az = z + h2 * k1z
        k2x = sigma * (ay - ax)
        k2y = ax * (r - az) - ay
        k2z = ax * ay - b * az
        ax = x + h2 * k2x
        ay = y + h2 * k2y
        az = z + h2 * k2z
        k3x = sigma * (ay - ax)
        k3y = ax * (r - az) - ay
        k3z = ax * ay - b * az
        ax = x + dt * k3x
        ay = y + dt * k3y
        az = z + dt * k3z
        k4x = sigma * (ay - ax)
        k4y = ax * (r - az) - ay
        k4z = ax * ay - b * az
        x = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        z = z + dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        if not (np.isfinite(x) and np.isfinite(y) and np.isfinite(z)):
            out[i + 1, 0] = x
            out[i + 1, 1] = y
            out[i + 1, 2] = z
            return out, i + 1
        out[i + 1, 0] = x
        out[i + 1, 1] = y
        out[i + 1, 2] = z
    return out, -1


def lorenz_trajectory(
    params: LorenzParams, init, dt: float = 0.01, n_steps: int = 5000
) -> Trajectory:
    """Integrate the Lorenz flow with fixed-step classical RK4.

    Returns ``n_steps + 1`` states (the initial one included).
    """
    if not (0 < dt <= MAX_DT):
        raise DomainError(f"dt must lie in (0, {MAX_DT}], got {dt}")
    if n_steps < 1:
        raise DomainError("n_steps must be >= 1")
    x0, y0, z0 = (float(v) for v in init)
    states, bad = _lorenz_rk4(
        x0, y0, z0, float(params.sigma), float(params.r), float(params.lorenz_beta),
        float(dt), int(n_steps),
    )
    if bad >= 0:
        raise DivergenceError(f"Lorenz state became non-finite at step {bad}", bad)
    return Trajectory(states, ChipSequence(states[:, 0].copy(), "lorenz_x"))


def _classify(value: float, boundary: float) -> Stability:
    if abs(value - boundary) < MARGINAL_TOL:
        return "marginal"
    return "stable" if value < boundary else "unstable"


def lorenz_jacobian(point, params: LorenzParams) -> np.ndarray:
    x, y, z = point
    return np.array(
        [
            [-params.sigma, params.sigma, 0.0],
            [params.r - z, -1.0, -x],
            [y, x, -params.lorenz_beta],
        ]
    )


def lorenz_equilibria(params: LorenzParams) -> EquilibriumReport:
    points = [np.zeros(3)]
    if params.r > 1:
        c = math.sqrt(params.lorenz_beta * (params.r - 1))
        zc = params.r - 1
        points += [np.array([c, c, zc]), np.array([-c, -c, zc])]
    classes, eig = [], []
    for p in points:
        re = np.linalg.eigvals(lorenz_jacobian(p, params)).real
        eig.append(re)
        classes.append(_classify(float(re.max()), 0.0))
    return EquilibriumReport(points, classes, eig)


# ---------------------------------------------------------------------------
# Henon


@numba.njit(cache=True)
def _henon_iter(x, y, gamma, delta, n, bound):
    out = np.empty((n + 1, 2))
    out[0, 0] = x
    out[0, 1] = y
    for i in range(n):
        x, y = y + 1.0 - gamma * x * x, delta * x
        out[i + 1, 0] = x
        out[i + 1, 1] = y
        if not (abs(x) <= bound and abs(y) <= bound):
            return out, i + 1
    return out, -1


def henon_map(state, params: HenonParams) -> np.ndarray:
    x, y = state
    return np.array([y + 1.0 - params.gamma * x * x, params.delta * x])


def henon_trajectory(
    params: HenonParams, init, n: int, bound: float = HENON_BOUND
) -> Trajectory:
    """Iterate the Henon map ``n`` times; ``states`` holds ``n + 1`` rows."""
    if n < 1:
        raise DomainError("n must be >= 1")
    x0, y0 = (float(v) for v in init)
    states, bad = _henon_iter(x0, y0, float(params.gamma), float(params.delta), int(n), float(bound))
    if bad >= 0:
        raise DivergenceError(f"Henon orbit exceeded |state| <= {bound:g} at step {bad}", bad)
    return Trajectory(states, ChipSequence(states[:, 0].copy(), "henon_x"))


def henon_fixed_points(params: HenonParams) -> EquilibriumReport:
    """Fixed points solve gamma*x^2 + (1 - delta)*x - 1 = 0 with y = delta*x."""
    a, b, c = params.gamma, 1.0 - params.delta, -1.0
    if a == 0.0:
        xs = [] if b == 0.0 else [-c / b]
    else:
        disc = b * b - 4 * a * c
        if disc < 0:
            return EquilibriumReport([], [], [], note="no real fixed points")
        # cancellation-free form; matters for tiny gamma
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        xs = sorted({q / a, c / q}, reverse=True)
    points, classes, eig = [], [], []
    for x in xs:
        p = np.array([x, params.delta * x])
        jac = np.array([[-2 * params.gamma * x, 1.0], [params.delta, 0.0]])
        mod = np.abs(np.linalg.eigvals(jac))
        points.append(p)
        eig.append(mod)
        classes.append(_classify(float(mod.max()), 1.0))
    note = "" if points else "no real fixed points"
    return EquilibriumReport(points, classes, eig, note=note)


# ---------------------------------------------------------------------------
# Chebyshev chips


@numba.njit(cache=True)
def _chebyshev(x, n):
    out = np.empty(n)
    for i in range(n):
        out[i] = x
        x = 1.0 - 2.0 * x * x
    return out


def chebyshev_sequence(init: float, length: int) -> ChipSequence:
    """Chips x, 1 - 2x^2, ... starting with ``init`` itself.

    Starting points in the countable set that lands on the fixed points
    (-1, 1/2) after finitely many steps, e.g. 0, +-1/sqrt(2), -1/2, give a
    degenerate periodic tail; they are accepted but useless as spreading codes.
    """
    if not (-1.0 < init < 1.0):
        raise DomainError(f"Chebyshev init must lie in (-1, 1), got {init}")
    if length < 1:
        raise DomainError("length must be >= 1")
    return ChipSequence(_chebyshev(float(init), int(length)), "chebyshev")


# ---------------------------------------------------------------------------
# Multisine baseline


def multisine_waveform(
    n_tones: int, samples_per_fundamental_period: int = 64, n_periods: int = 64
) -> ChipSequence:
    """Equal-amplitude, zero-phase cosines at harmonics 1..n_tones, unit mean power."""
    if n_tones < 1 or n_periods < 1:
        raise DomainError("n_tones and n_periods must be >= 1")
    if samples_per_fundamental_period < 4 * n_tones:
        raise DomainError(
            f"need at least {4 * n_tones} samples per period for {n_tones} tones, "
            f"got {samples_per_fundamental_period}"
        )
    k = np.arange(samples_per_fundamental_period * n_periods)
    t = k / samples_per_fundamental_period
    harmonics = np.arange(1, n_tones + 1)
    s = np.cos(2 * np.pi * np.outer(t, harmonics)).sum(axis=1)
    s /= math.sqrt(np.mean(s * s))
    return ChipSequence(s, "multisine")
