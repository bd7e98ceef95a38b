#!/usr/bin/env python3
"""
Coin model for the one-defect two-phase quantum walk.

The walk uses
    U_+ = (1/sqrt2) [[1, e^{i s+}], [e^{-i s+}, -1]]   for x >= 1
    U_0 = diag(1, -1)                                 for x = 0
    U_- = (1/sqrt2) [[1, e^{i s-}], [e^{-i s-}, -1]]   for x <= -1

Each coin is split into P (top row) and Q (bottom row); P moves weight one
site left, Q one site right.

Usage:
    from coin_model import ModelParams, coin_at
    coin_at(ModelParams(1.5 * math.pi, math.pi), -2).matrix
"""

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.typing import NDArray

from qw_config import DEFAULT_TOLERANCE
from qw_errors import NormalizationError

INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class ModelParams:
    """Angle pair (sigma_plus, sigma_minus) defining the walk."""

    sigma_plus: float
    sigma_minus: float

    def __post_init__(self):
        for name in ("sigma_plus", "sigma_minus"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")

    @property
    def sigma(self) -> float:
        return (self.sigma_plus - self.sigma_minus) / 2.0

    @property
    def sigma_tilde(self) -> float:
        return (self.sigma_plus + self.sigma_minus) / 2.0

    @property
    def sin_sigma(self) -> float:
        return math.sin(self.sigma)

    def as_dict(self) -> dict:
        return {
            "sigma_plus": self.sigma_plus,
            "sigma_minus": self.sigma_minus,
            "sigma": self.sigma,
            "sigma_tilde": self.sigma_tilde,
        }


@dataclass(frozen=True)
class CoinOperator:
    """Row-major 2x2 complex matrix [[a, b], [c, d]]."""

    a: complex
    b: complex
    c: complex
    d: complex

    @property
    def matrix(self) -> NDArray[np.complex128]:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __add__(self, other: "CoinOperator") -> "CoinOperator":
        return CoinOperator(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)


@dataclass(frozen=True)
class PolarState:
    """alpha = a e^{i phi1}, beta = b e^{i phi2}."""

    a: float
    phi1: float
    b: float
    phi2: float

    @property
    def phi12(self) -> float:
        return self.phi1 - self.phi2


@dataclass(frozen=True)
class QubitState:
    """Chirality amplitudes (left, right) at one site."""

    left_amp: complex
    right_amp: complex

    @classmethod
    def from_polar(cls, a: float, phi1: float, b: float, phi2: float) -> "QubitState":
        return cls(a * cmath.exp(1j * phi1), b * cmath.exp(1j * phi2))

    @classmethod
    def from_array(cls, values) -> "QubitState":
        return cls(complex(values[0]), complex(values[1]))

    @property
    def norm_sq(self) -> float:
        return abs(self.left_amp) ** 2 + abs(self.right_amp) ** 2

    def polar(self) -> PolarState:
        return PolarState(
            abs(self.left_amp),
            cmath.phase(self.left_amp),
            abs(self.right_amp),
            cmath.phase(self.right_amp),
        )

    def as_array(self) -> NDArray[np.complex128]:
        return np.array([self.left_amp, self.right_amp], dtype=np.complex128)

    def scaled(self, factor: complex) -> "QubitState":
        return QubitState(self.left_amp * factor, self.right_amp * factor)

    def normalized(self) -> "QubitState":
        norm = math.sqrt(self.norm_sq)
        if norm == 0.0:
            raise NormalizationError("cannot normalize the zero state")
        return self.scaled(1.0 / norm)

    def require_normalized(self, tol: float = DEFAULT_TOLERANCE) -> "QubitState":
        """Return self if |alpha|^2+|beta|^2 = 1 within tol, otherwise raise."""
        if abs(self.norm_sq - 1.0) > tol:
            raise NormalizationError(
                f"initial state must have unit norm, got |alpha|^2+|beta|^2 = {self.norm_sq:.17g}"
            )
        return self


def _phase_coin(sigma: float) -> CoinOperator:
    return CoinOperator(
        INV_SQRT2,
        INV_SQRT2 * cmath.exp(1j * sigma),
        INV_SQRT2 * cmath.exp(-1j * sigma),
        -INV_SQRT2,
    )


DEFECT_COIN = CoinOperator(1.0 + 0j, 0j, 0j, -1.0 + 0j)


def coin_at(params: ModelParams, x: int) -> CoinOperator:
    """Coin acting at site x."""
    if x >= 1:
        return _phase_coin(params.sigma_plus)
    if x <= -1:
        return _phase_coin(params.sigma_minus)
    return DEFECT_COIN


def split_coin(coin: CoinOperator) -> Tuple[CoinOperator, CoinOperator]:
    """Split U into P (top row kept) and Q (bottom row kept), P + Q = U."""
    p = CoinOperator(coin.a, coin.b, 0j, 0j)
    q = CoinOperator(0j, 0j, coin.c, coin.d)
    return p, q


def check_unitary(coin: CoinOperator, tol: float = DEFAULT_TOLERANCE) -> bool:
    """True iff max |U^dagger U - I| < tol."""
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    u = coin.matrix
    deviation = np.max(np.abs(u.conj().T @ u - np.eye(2)))
    return bool(deviation < tol)


def coin_arrays(
    params: ModelParams, positions: NDArray[np.int64]
) -> Tuple[NDArray[np.complex128], ...]:
    """
    Vectorized coin entries (a, b, c, d) for every site in ``positions``.

    Agrees entry-by-entry with :func:`coin_at`.
    """
    positions = np.asarray(positions)
    n = positions.shape[0]
    a = np.full(n, INV_SQRT2, dtype=np.complex128)
    d = np.full(n, -INV_SQRT2, dtype=np.complex128)
    b = np.empty(n, dtype=np.complex128)
    c = np.empty(n, dtype=np.complex128)

    plus = positions >= 1
    minus = positions <= -1
    origin = positions == 0

    upper = _phase_coin(params.sigma_plus)
    lower = _phase_coin(params.sigma_minus)
    b[plus] = upper.b
    c[plus] = upper.c
    b[minus] = lower.b
    c[minus] = lower.c

    a[origin] = 1.0
    b[origin] = 0.0
    c[origin] = 0.0
    d[origin] = -1.0
    return a, b, c, d
