#!/usr/bin/env python3
"""
Exact time evolution of the two-phase quantum walk.

Psi_t(x) = Q_{x-1} Psi_{t-1}(x-1) + P_{x+1} Psi_{t-1}(x+1)

The wavefunction lives on a window that grows by one site per side per
step, so nothing ever leaves the light cone and no boundary is introduced.

Usage:
    from evolution import initial_window, step, distribution, time_average
    m = time_average(ModelParams(0.0, 0.0), QubitState(1, 0), horizon=1000)
    m.value(0)
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np
from numpy.typing import NDArray

from coin_model import ModelParams, QubitState, coin_arrays
from qw_config import DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WaveWindow:
    """
    Wavefunction on the contiguous sites origin_offset .. origin_offset + n - 1.

    ``amps`` has shape (n, 2): column 0 is the left chirality, column 1 the right.
    """

    time: int
    origin_offset: int
    amps: NDArray[np.complex128]

    @property
    def size(self) -> int:
        return int(self.amps.shape[0])

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(self.origin_offset, self.origin_offset + self.size)

    @property
    def last_position(self) -> int:
        return self.origin_offset + self.size - 1

    def at(self, x: int) -> QubitState:
        idx = x - self.origin_offset
        if 0 <= idx < self.size:
            return QubitState.from_array(self.amps[idx])
        return QubitState(0j, 0j)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


@dataclass(frozen=True)
class Measure:
    """Non-negative mass on the contiguous sites origin_offset .. origin_offset + n - 1."""

    origin_offset: int
    mass: NDArray[np.float64]

    @classmethod
    def from_values(cls, origin_offset: int, values) -> "Measure":
        mass = np.asarray(values, dtype=np.float64)
        if np.any(mass < 0):
            raise ValueError("measure entries must be non-negative")
        return cls(origin_offset, mass)

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(self.origin_offset, self.origin_offset + self.mass.shape[0])

    def value(self, x: int) -> float:
        idx = x - self.origin_offset
        if 0 <= idx < self.mass.shape[0]:
            return float(self.mass[idx])
        return 0.0

    def total(self) -> float:
        return float(np.sum(self.mass))

    def padded(self, lo: int, hi: int) -> "Measure":
        """Same measure on [lo, hi] with explicit zeros; mass outside is dropped."""
        out = np.zeros(hi - lo + 1, dtype=np.float64)
        first = max(lo, self.origin_offset)
        last = min(hi, self.origin_offset + self.mass.shape[0] - 1)
        if first <= last:
            src = self.mass[first - self.origin_offset : last - self.origin_offset + 1]
            out[first - lo : last - lo + 1] = src
        return Measure(lo, out)

    def rows(self) -> List[Tuple[int, float]]:
        return [(int(x), float(v)) for x, v in zip(self.positions, self.mass)]


def initial_window(phi0: QubitState, tol: float = DEFAULT_TOLERANCE) -> WaveWindow:
    """Time-0 window holding phi0 at the origin."""
    phi0.require_normalized(tol)
    amps = np.zeros((1, 2), dtype=np.complex128)
    amps[0] = phi0.as_array()
    return WaveWindow(time=0, origin_offset=0, amps=amps)


def _advance(
    left: NDArray[np.complex128],
    right: NDArray[np.complex128],
    coins: Tuple[NDArray[np.complex128], ...],
) -> Tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Apply the site coins then shift; the output is two sites longer."""
    a, b, c, d = coins
    n = left.shape[0]
    new_left = np.zeros(n + 2, dtype=np.complex128)
    new_right = np.zeros(n + 2, dtype=np.complex128)
    # P part moves to x - 1, Q part to x + 1
    new_left[:n] = a * left + b * right
    new_right[2:] = c * left + d * right
    return new_left, new_right


def step(window: WaveWindow, params: ModelParams) -> WaveWindow:
    """One application of the evolution operator; the input window is left untouched."""
    coins = coin_arrays(params, window.positions)
    new_left, new_right = _advance(window.amps[:, 0], window.amps[:, 1], coins)
    return WaveWindow(
        time=window.time + 1,
        origin_offset=window.origin_offset - 1,
        amps=np.stack([new_left, new_right], axis=1),
    )


def evolve(params: ModelParams, phi0: QubitState, steps: int) -> Iterator[WaveWindow]:
    """Yield the windows for t = 0 .. steps."""
    window = initial_window(phi0)
    yield window
    for _ in range(steps):
        window = step(window, params)
        yield window


def distribution(window: WaveWindow) -> Measure:
    """P(X_t = x) = |Psi^L(x)|^2 + |Psi^R(x)|^2 on the window."""
    return Measure(window.origin_offset, np.sum(np.abs(window.amps) ** 2, axis=1))


def _iterate_distributions(
    params: ModelParams, phi0: QubitState, horizon: int
) -> Iterator[Tuple[int, NDArray[np.float64]]]:
    """
    Yield (t, probabilities on [-t, t]) for t < horizon.

    Coin entries for the final light cone are built once and sliced per step.
    """
    phi0.require_normalized()
    radius = max(horizon - 1, 0)
    all_positions = np.arange(-radius, radius + 1)
    all_coins = coin_arrays(params, all_positions)

    left = np.array([phi0.left_amp], dtype=np.complex128)
    right = np.array([phi0.right_amp], dtype=np.complex128)
    for t in range(horizon):
        yield t, np.abs(left) ** 2 + np.abs(right) ** 2
        if t == horizon - 1:
            break
        lo = radius - t
        coins = tuple(arr[lo : lo + 2 * t + 1] for arr in all_coins)
        left, right = _advance(left, right, coins)


def time_average(params: ModelParams, phi0: QubitState, horizon: int) -> Measure:
    """(1/T) sum_{t=0}^{T-1} P(X_t = x) with T = horizon, on [-(T-1), T-1]."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    radius = horizon - 1
    acc = np.zeros(2 * radius + 1, dtype=np.float64)
    for t, probs in _iterate_distributions(params, phi0, horizon):
        acc[radius - t : radius + t + 1] += probs
    logger.debug("time_average: horizon=%d, window=%d sites", horizon, acc.shape[0])
    return Measure(-radius, acc / horizon)


def origin_probabilities(
    params: ModelParams, phi0: QubitState, horizon: int
) -> NDArray[np.float64]:
    """P(X_t = 0) for t = 0 .. horizon - 1."""
    out = np.empty(horizon, dtype=np.float64)
    for t, probs in _iterate_distributions(params, phi0, horizon):
        out[t] = probs[t]
    return out


def norm_drift(params: ModelParams, phi0: QubitState, horizon: int) -> float:
    """max_{t < horizon} |sum_x P(X_t = x) - 1|."""
    drift = 0.0
    for _, probs in _iterate_distributions(params, phi0, horizon):
        drift = max(drift, abs(float(np.sum(probs)) - 1.0))
    return drift


def distribution_at(params: ModelParams, phi0: QubitState, time: int) -> Measure:
    """Distribution after ``time`` steps."""
    probs = None
    for _, probs in _iterate_distributions(params, phi0, time + 1):
        pass
    return Measure(-time, probs)


def asymmetry_gap(m: Measure) -> float:
    """max_x |m(x) - m(-x)|."""
    reach = max(abs(m.origin_offset), abs(m.origin_offset + m.mass.shape[0] - 1))
    sym = m.padded(-reach, reach).mass
    return float(np.max(np.abs(sym - sym[::-1])))
