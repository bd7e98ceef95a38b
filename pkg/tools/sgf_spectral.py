#!/usr/bin/env python3
"""
Stationary measures of the two-phase walk from the eigenvalue problem U Psi = lambda Psi.

There are four closed-form eigenpairs. With eps = +1 for j in {1, 2} and
eps = -1 for j in {3, 4}, and s_eps = sqrt(3 + 2 sqrt2 eps sin(sigma)):

    x >= 1 :  Psi(x) = [A, B] r^x
    x  = 0 :  Psi(0) = [A, D]
    x <= -1:  Psi(x) = [C, D] q^{|x|}

    A = c/sqrt2,  D = -eps i e^{-i sigma~} c/sqrt2
    B = (e^{-i sigma+}/sqrt2 - eps i e^{-i sigma~}) c
    C = (1 + eps (i/sqrt2) e^{-i sigma}) c
    r = +-i/s_eps,  q = -r   (sign + for j in {1, 3})

The stationary measure mu(x) = |Psi^L(x)|^2 + |Psi^R(x)|^2 decays like
(1/s_eps^2)^{|x|} on both sides of the origin.

``shifted_phase=True`` replaces the phase sigma in C by (sigma+ + 3 sigma-)/2.
That variant only solves the eigenvalue equation when sigma- is a multiple
of pi; it is kept for comparison reports.
"""

import cmath
import logging
import math
from dataclasses import dataclass, replace
from typing import List

import numpy as np

from coin_model import ModelParams, QubitState
from evolution import WaveWindow, step
from qw_config import BRANCH_TOLERANCE, DEFAULT_TOLERANCE
from qw_errors import BranchAbsentError

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
EIGEN_INDICES = (1, 2, 3, 4)


@dataclass(frozen=True)
class Eigenpair:
    """
    One of the four closed-form eigenpairs.

    ``origin_state`` is Psi(0) for c = 1; the actual eigenvector is scale_c times it.
    """

    index: int
    lam: complex
    origin_state: QubitState
    scale_c: complex = 1.0 + 0j

    @property
    def branch_sign(self) -> int:
        """+1 for j in {1, 2}, -1 for j in {3, 4}."""
        return 1 if self.index in (1, 2) else -1

    @property
    def root_sign(self) -> int:
        """+1 for j in {1, 3}, -1 for j in {2, 4}."""
        return 1 if self.index in (1, 3) else -1

    def with_scale(self, c: complex) -> "Eigenpair":
        return replace(self, scale_c=complex(c))


@dataclass(frozen=True)
class RootPair:
    """Roots of z^2 - sqrt2 (1/lambda - lambda) z - 1 = 0 ordered by modulus."""

    theta_s: complex
    theta_l: complex
    degenerate: bool = False


def decay_ratio(params: ModelParams, branch_sign: int) -> float:
    """1 / (3 + 2 sqrt2 eps sin(sigma))."""
    return 1.0 / (3.0 + 2.0 * SQRT2 * branch_sign * params.sin_sigma)


def eigenvalues(params: ModelParams, c: complex = 1.0 + 0j) -> List[Eigenpair]:
    """The four eigenpairs j = 1..4 with free constant c."""
    sigma = params.sigma
    cos_s, sin_s = math.cos(sigma), math.sin(sigma)
    s_plus = math.sqrt(3.0 + 2.0 * SQRT2 * sin_s)
    s_minus = math.sqrt(3.0 - 2.0 * SQRT2 * sin_s)

    lam1 = complex(cos_s, sin_s + SQRT2) / s_plus
    lam3 = -complex(cos_s, sin_s - SQRT2) / s_minus

    phase = cmath.exp(-1j * params.sigma_tilde)
    origin_12 = QubitState(1.0 / SQRT2, -1j * phase / SQRT2)
    origin_34 = QubitState(1.0 / SQRT2, 1j * phase / SQRT2)

    c = complex(c)
    return [
        Eigenpair(1, lam1, origin_12, c),
        Eigenpair(2, -lam1, origin_12, c),
        Eigenpair(3, lam3, origin_34, c),
        Eigenpair(4, -lam3, origin_34, c),
    ]


def eigenpair(params: ModelParams, index: int, c: complex = 1.0 + 0j) -> Eigenpair:
    if index not in EIGEN_INDICES:
        raise ValueError(f"eigen index must be one of {EIGEN_INDICES}, got {index}")
    return eigenvalues(params, c)[index - 1]


def shifted_negative_phase(params: ModelParams) -> float:
    """(sigma+ + 3 sigma-)/2."""
    return (params.sigma_plus + 3.0 * params.sigma_minus) / 2.0


def _amplitude_constants(pair: Eigenpair, params: ModelParams, use_shifted: bool):
    eps = pair.branch_sign
    c = pair.scale_c
    s_eps = math.sqrt(3.0 + 2.0 * SQRT2 * eps * params.sin_sigma)
    ratio = pair.root_sign * 1j / s_eps
    neg_phase = shifted_negative_phase(params) if use_shifted else params.sigma

    a_coef = c * pair.origin_state.left_amp
    d_coef = c * pair.origin_state.right_amp
    b_coef = (
        cmath.exp(-1j * params.sigma_plus) / SQRT2 - eps * 1j * cmath.exp(-1j * params.sigma_tilde)
    ) * c
    c_coef = (1.0 + eps * (1j / SQRT2) * cmath.exp(-1j * neg_phase)) * c
    return a_coef, b_coef, c_coef, d_coef, ratio, -ratio


def eigenvector(
    pair: Eigenpair,
    params: ModelParams,
    x_min: int,
    x_max: int,
    shifted_phase: bool = False,
) -> WaveWindow:
    """
    Closed-form eigenvector on [x_min, x_max].

    Args:
        pair: eigenpair (index and free constant c)
        params: walk parameters
        x_min: first site, must be <= 0
        x_max: last site, must be >= 0
        shifted_phase: use the (sigma+ + 3 sigma-)/2 phase on x <= -1

    Returns:
        WaveWindow at time 0 covering [x_min, x_max]
    """
    if not x_min <= 0 <= x_max:
        raise ValueError(f"window must contain the origin, got [{x_min}, {x_max}]")

    a_coef, b_coef, c_coef, d_coef, r, q = _amplitude_constants(pair, params, shifted_phase)
    positions = np.arange(x_min, x_max + 1)
    amps = np.zeros((positions.shape[0], 2), dtype=np.complex128)

    right = positions >= 1
    left = positions <= -1
    pow_r = r ** positions[right].astype(np.float64)
    pow_q = q ** (-positions[left]).astype(np.float64)

    amps[right, 0] = a_coef * pow_r
    amps[right, 1] = b_coef * pow_r
    amps[positions == 0] = [a_coef, d_coef]
    amps[left, 0] = c_coef * pow_q
    amps[left, 1] = d_coef * pow_q
    return WaveWindow(time=0, origin_offset=x_min, amps=amps)


def stationary_measure(
    pair: Eigenpair, params: ModelParams, x: int, shifted_phase: bool = False
) -> float:
    """
    mu(x) = |Psi^L(x)|^2 + |Psi^R(x)|^2 in closed form.

    x >= 1 : (2 + eps sqrt2 sin sigma) |c|^2 rho^x
    x  = 0 : |c|^2
    x <= -1: (2 + eps sqrt2 sin phase) |c|^2 rho^{-x}

    with rho = 1/(3 + 2 sqrt2 eps sin sigma) and phase = sigma
    (or (sigma+ + 3 sigma-)/2 when shifted_phase is set).
    """
    eps = pair.branch_sign
    weight = abs(pair.scale_c) ** 2
    if x == 0:
        return weight
    rho = decay_ratio(params, eps)
    if x > 0:
        return (2.0 + eps * SQRT2 * params.sin_sigma) * weight * rho**x
    phase = shifted_negative_phase(params) if shifted_phase else params.sigma
    return (2.0 + eps * SQRT2 * math.sin(phase)) * weight * rho ** (-x)


def is_summable(pair: Eigenpair, params: ModelParams, tol: float = BRANCH_TOLERANCE) -> bool:
    """True when the eigenvector decays away from the origin."""
    return decay_ratio(params, pair.branch_sign) < 1.0 - tol


def normalizing_scale(pair: Eigenpair, params: ModelParams) -> float:
    """|c| making sum_x mu(x) = 1, i.e. |c|^2 = (1 + eps sqrt2 s)/(3 + 2 sqrt2 eps s)."""
    if not is_summable(pair, params):
        raise BranchAbsentError(
            f"eigenvector j={pair.index} is not summable for sin(sigma)={params.sin_sigma:.6g}"
        )
    eps = pair.branch_sign
    s = params.sin_sigma
    return math.sqrt((1.0 + eps * SQRT2 * s) / (3.0 + 2.0 * SQRT2 * eps * s))


def stationary_total_mass(
    pair: Eigenpair, params: ModelParams, shifted_phase: bool = False
) -> float:
    """Closed-form sum over all x of the stationary measure."""
    if not is_summable(pair, params):
        raise BranchAbsentError(f"eigenvector j={pair.index} is not summable")
    rho = decay_ratio(params, pair.branch_sign)
    tail = rho / (1.0 - rho)
    plus_side = stationary_measure(pair, params, 1) / rho
    minus_side = stationary_measure(pair, params, -1, shifted_phase=shifted_phase) / rho
    return abs(pair.scale_c) ** 2 + (plus_side + minus_side) * tail


def theta_roots(lam: complex, tol: float = DEFAULT_TOLERANCE) -> RootPair:
    """
    Roots of z^2 - sqrt2 (1/lambda - lambda) z - 1 = 0.

    The product is always -1. When both roots sit on the unit circle the pair
    is flagged degenerate instead of silently ordered.
    """
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e3 * tol:
        raise ValueError(f"lambda must have unit modulus, got |lambda| = {abs(lam)!r}")
    roots = np.roots([1.0, -SQRT2 * (1.0 / lam - lam), -1.0])
    small, large = sorted((complex(z) for z in roots), key=abs)
    degenerate = abs(abs(small) - 1.0) < math.sqrt(tol) and abs(abs(large) - 1.0) < math.sqrt(tol)
    if degenerate:
        logger.debug("theta_roots: degenerate pair at lambda=%r", lam)
    return RootPair(theta_s=small, theta_l=large, degenerate=degenerate)


def eigen_residual(
    pair: Eigenpair,
    params: ModelParams,
    radius: int,
    relative: bool = False,
    shifted_phase: bool = False,
) -> float:
    """
    max |(U Psi)(x) - lambda Psi(x)| over x in [-radius+1, radius-1].

    The eigenvector is built on [-radius-1, radius+1] and pushed through one
    evolution step. With ``relative`` the result is divided by the largest
    amplitude on the window, which keeps growing solutions comparable.
    """
    if radius < 2:
        raise ValueError(f"radius must be >= 2, got {radius}")
    window = eigenvector(pair, params, -radius - 1, radius + 1, shifted_phase=shifted_phase)
    pushed = step(window, params)

    lo, hi = -radius + 1, radius - 1
    before = window.amps[lo - window.origin_offset : hi - window.origin_offset + 1]
    after = pushed.amps[lo - pushed.origin_offset : hi - pushed.origin_offset + 1]
    residual = float(np.max(np.abs(after - pair.lam * before)))
    if relative:
        scale = float(np.max(np.abs(window.amps)))
        if scale > 0:
            residual /= scale
    return residual
