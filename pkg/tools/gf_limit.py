#!/usr/bin/env python3
"""
Time-averaged limit measure of the two-phase walk via generating functions.

With z = e^{i theta} on the arcs |sin theta| >= 1/sqrt2 the kernels are

    phi~(theta):  cos phi~ = sqrt2 cos theta,  sin phi~ = sgn(sin theta) sqrt(-cos 2 theta)
    f0+(z) = e^{i(theta + sigma+)} e^{i phi~},   f0-(z) = e^{i(theta - sigma-)} e^{i phi~}
    lam+(z) = 1/(e^{i phi~} - sqrt2 e^{-i theta}),   lam-(z) = -lam+(z)
    Lambda0(z) = 1 + f0+ f0- = 1 + e^{2i(theta + sigma + phi~)}

and the Fourier-Laplace transform of the amplitude matrices is

    Xi_0(z)        = (1/Lambda0) [[1, -f0+], [f0-, 1]]
    Xi_x(z), x>=1  = -(lam+^{x-1}/Lambda0) [lam+ f0+, z]^T [f0-, 1]
    Xi_x(z), x<=-1 = (lam-^{|x|-1}/Lambda0) [z, lam- f0-]^T [1, -f0+]

The limit measure is the sum over the unit-circle poles of the squared
residue norms. Inside the disk f0 is continued from the root of
g^2 - sqrt2 (1 + z^2) g + z^2 = 0 that vanishes at z = 0.

Usage:
    from gf_limit import limit_measure, singular_points
    limit_measure(ModelParams(0.0, 0.0), QubitState(1, 0), 0)   # 2/9
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import brentq

from coin_model import ModelParams, QubitState
from evolution import evolve
from qw_config import BRANCH_TOLERANCE, DEFAULT_TOLERANCE
from qw_errors import BranchAbsentError, OutOfBranchError, PoleError
from sgf_spectral import eigenpair, stationary_measure

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
INV_SQRT2 = 1.0 / SQRT2

PLUS = "plus"
MINUS = "minus"
SIDES = (PLUS, MINUS)

THETA1 = "theta1"
THETA2 = "theta2"
BRANCHES = (THETA1, THETA2)

POLE_TOLERANCE = 1e-10
# arc endpoint and the direction pointing into its arc
ARC_ENDPOINTS = (
    (math.pi / 4, 1.0),
    (3 * math.pi / 4, -1.0),
    (5 * math.pi / 4, 1.0),
    (7 * math.pi / 4, -1.0),
)
RESIDUE_DISTANCES = (1e-3, 1e-4, 1e-5)


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")


def _phi_parts(theta: float, tol: float = BRANCH_TOLERANCE) -> Tuple[float, float]:
    """(cos phi~, sin phi~) on the localization arcs."""
    sin_t = math.sin(theta)
    if abs(sin_t) < INV_SQRT2 - tol:
        raise OutOfBranchError(f"|sin theta| = {abs(sin_t):.6g} < 1/sqrt2 at theta = {theta!r}")
    radicand = max(-math.cos(2.0 * theta), 0.0)
    return SQRT2 * math.cos(theta), math.copysign(math.sqrt(radicand), sin_t)


def tilde_phi(theta: float, tol: float = BRANCH_TOLERANCE) -> float:
    """Angle phi~(theta) with cos phi~ = sqrt2 cos theta."""
    cos_p, sin_p = _phi_parts(theta, tol)
    return math.atan2(sin_p, cos_p)


def phi_derivative(theta: float, method: str = "closed", h: float = 1e-6) -> float:
    """
    d phi~/d theta = sqrt2 |sin theta| / sqrt(2 sin^2 theta - 1).

    ``method="finite_difference"`` uses a central difference of the unwrapped
    phase instead. Infinite at the arc endpoints.
    """
    if method == "closed":
        _phi_parts(theta)
        sin_t = math.sin(theta)
        radicand = -math.cos(2.0 * theta)
        if radicand <= 0.0:
            return math.inf
        return SQRT2 * abs(sin_t) / math.sqrt(radicand)
    if method == "finite_difference":
        fwd = complex(*_phi_parts(theta + h))
        back = complex(*_phi_parts(theta - h))
        return cmath.phase(fwd * back.conjugate()) / (2.0 * h)
    raise ValueError(f"unknown derivative method: {method!r}")


@dataclass(frozen=True)
class GFKernel:
    """Kernels f0, lam~ and Lambda0 on the unit circle for fixed parameters."""

    params: ModelParams
    tol: float = BRANCH_TOLERANCE

    def unit_phase(self, theta: float) -> complex:
        """e^{i phi~(theta)}."""
        return complex(*_phi_parts(theta, self.tol))

    def g(self, theta: float) -> complex:
        """Sigma-free part z e^{i phi~}, so that f0+ = e^{i sigma+} g and f0- = e^{-i sigma-} g."""
        return cmath.exp(1j * theta) * self.unit_phase(theta)

    def f0(self, theta: float, side: str) -> complex:
        _check_side(side)
        g = self.g(theta)
        if side == PLUS:
            return cmath.exp(1j * self.params.sigma_plus) * g
        return cmath.exp(-1j * self.params.sigma_minus) * g

    def lambda_tilde(self, theta: float, side: str) -> complex:
        _check_side(side)
        lam = 1.0 / (self.unit_phase(theta) - SQRT2 * cmath.exp(-1j * theta))
        return lam if side == PLUS else -lam

    def capital_lambda(self, theta: float) -> complex:
        return 1.0 + self.f0(theta, PLUS) * self.f0(theta, MINUS)

    def xi_tilde(self, theta: float, x: int) -> NDArray[np.complex128]:
        big_lambda = self.capital_lambda(theta)
        if abs(big_lambda) < POLE_TOLERANCE:
            raise PoleError(f"e^(i theta) with theta = {theta!r} is a singular point")
        return _xi_matrix(cmath.exp(1j * theta), self.g(theta), self.params, x)


def f0(theta: float, params: ModelParams, side: str) -> complex:
    """Unit-circle value of f0 on the given side."""
    return GFKernel(params).f0(theta, side)


def lambda_tilde(theta: float, params: ModelParams, side: str) -> complex:
    """Unit-circle value of lam~ on the given side."""
    return GFKernel(params).lambda_tilde(theta, side)


def capital_lambda(theta: float, params: ModelParams) -> complex:
    """Lambda0(e^{i theta}) = 1 + f0+ f0-."""
    return GFKernel(params).capital_lambda(theta)


def xi_tilde_matrix(theta: float, params: ModelParams, x: int) -> NDArray[np.complex128]:
    """Xi_x(e^{i theta}); raises PoleError at singular points."""
    return GFKernel(params).xi_tilde(theta, x)


def _xi_matrix(z: complex, g: complex, params: ModelParams, x: int) -> NDArray[np.complex128]:
    f_plus = cmath.exp(1j * params.sigma_plus) * g
    f_minus = cmath.exp(-1j * params.sigma_minus) * g
    inv_lambda = 1.0 / (1.0 + f_plus * f_minus)
    if x == 0:
        return inv_lambda * np.array([[1.0, -f_plus], [f_minus, 1.0]], dtype=np.complex128)

    lam_plus = z / (g - SQRT2)
    if x >= 1:
        column = np.array([lam_plus * f_plus, z], dtype=np.complex128)
        row = np.array([f_minus, 1.0], dtype=np.complex128)
        return -(lam_plus ** (x - 1)) * inv_lambda * np.outer(column, row)

    lam_minus = -lam_plus
    column = np.array([z, lam_minus * f_minus], dtype=np.complex128)
    row = np.array([1.0, -f_plus], dtype=np.complex128)
    return lam_minus ** (-x - 1) * inv_lambda * np.outer(column, row)


def _small_root_path(z: complex, steps: int) -> complex:
    """Follow the root of g^2 - sqrt2 (1 + w^2) g + w^2 = 0 with g(0) = 0 along w = t z."""
    g = 0j
    for k in range(1, steps + 1):
        w = z * (k / steps)
        p = SQRT2 * (1.0 + w * w)
        disc = cmath.sqrt(p * p - 4.0 * w * w)
        r1 = (p + disc) / 2.0 if abs(p + disc) >= abs(p - disc) else (p - disc) / 2.0
        r2 = w * w / r1
        g = r1 if abs(r1 - g) < abs(r2 - g) else r2
    return g


def f0_interior(z: complex, params: ModelParams, side: str, steps: int = 256) -> complex:
    """f0 inside the unit disk on the branch analytic at z = 0."""
    _check_side(side)
    if abs(z) >= 1.0:
        raise ValueError(f"interior evaluation needs |z| < 1, got {abs(z)!r}")
    g = _small_root_path(complex(z), steps)
    if side == PLUS:
        return cmath.exp(1j * params.sigma_plus) * g
    return cmath.exp(-1j * params.sigma_minus) * g


def xi_tilde_interior(
    z: complex, params: ModelParams, x: int, steps: int = 256
) -> NDArray[np.complex128]:
    """Xi_x(z) for |z| < 1."""
    if abs(z) >= 1.0:
        raise ValueError(f"interior evaluation needs |z| < 1, got {abs(z)!r}")
    g = _small_root_path(complex(z), steps)
    return _xi_matrix(complex(z), g, params, x)


def truncated_series(
    params: ModelParams, phi0: QubitState, z: complex, x: int, terms: int = 90
) -> NDArray[np.complex128]:
    """sum_{t < terms} Psi_t(x) z^t from direct evolution."""
    total = np.zeros(2, dtype=np.complex128)
    power = 1.0 + 0j
    for window in evolve(params, phi0, terms - 1):
        total += window.at(x).as_array() * power
        power *= z
    return total


@dataclass(frozen=True)
class SingularSet:
    """Unit-circle poles of Xi_x(z); each branch holds its (+, -) pair."""

    theta1_present: bool
    theta2_present: bool
    theta1: Tuple[complex, ...] = ()
    theta2: Tuple[complex, ...] = ()

    def points(self) -> List[Tuple[str, complex]]:
        out = []
        for label, zs in ((THETA1, self.theta1), (THETA2, self.theta2)):
            for sign, z in zip(("+", "-"), zs):
                out.append((label + sign, z))
        return out

    def branch_points(self, which: str) -> Tuple[complex, ...]:
        if which == THETA1:
            return self.theta1
        if which == THETA2:
            return self.theta2
        raise ValueError(f"branch must be one of {BRANCHES}, got {which!r}")


def _plus_branch_active(params: ModelParams, tol: float) -> bool:
    return params.sin_sigma >= -INV_SQRT2 - tol


def _minus_branch_active(params: ModelParams, tol: float) -> bool:
    return params.sin_sigma <= INV_SQRT2 + tol


def singular_points(params: ModelParams, tol: float = BRANCH_TOLERANCE) -> SingularSet:
    """
    Closed-form poles on |z| = 1:

        e^{i theta1(+-)} = +-(cos s + (sqrt2 - sin s) i)/sqrt(3 - 2 sqrt2 sin s),  sin s <= 1/sqrt2
        e^{i theta2(+-)} = +-(cos s - (sqrt2 + sin s) i)/sqrt(3 + 2 sqrt2 sin s),  sin s >= -1/sqrt2
    """
    sigma = params.sigma
    cos_s, sin_s = math.cos(sigma), math.sin(sigma)

    theta1: Tuple[complex, ...] = ()
    theta2: Tuple[complex, ...] = ()
    has1 = _minus_branch_active(params, tol)
    has2 = _plus_branch_active(params, tol)
    if has1:
        z = complex(cos_s, SQRT2 - sin_s) / math.sqrt(3.0 - 2.0 * SQRT2 * sin_s)
        theta1 = (z, -z)
    if has2:
        z = complex(cos_s, -(SQRT2 + sin_s)) / math.sqrt(3.0 + 2.0 * SQRT2 * sin_s)
        theta2 = (z, -z)
    if abs(abs(sin_s) - INV_SQRT2) <= tol:
        logger.debug("singular_points: sin(sigma) on the branch boundary, endpoint pair kept")
    return SingularSet(has1, has2, theta1, theta2)


def residue_norm_sq(params: ModelParams, which: str, tol: float = BRANCH_TOLERANCE) -> float:
    """|Res(1/Lambda0)|^2 at the poles of one branch."""
    sset = singular_points(params, tol)
    if not sset.branch_points(which):
        raise BranchAbsentError(f"branch {which} is absent for sin(sigma) = {params.sin_sigma:.6g}")
    s = params.sin_sigma
    if which == THETA1:
        return 0.25 * ((SQRT2 * s - 1.0) / (2.0 * SQRT2 * s - 3.0)) ** 2
    return 0.25 * ((SQRT2 * s + 1.0) / (2.0 * SQRT2 * s + 3.0)) ** 2


def residue_norm_sq_from_derivative(
    params: ModelParams, which: str, method: str = "closed", tol: float = BRANCH_TOLERANCE
) -> float:
    """1/|Lambda0'|^2 = 1/(4 |1 + d phi~/d theta|^2) at the branch's poles."""
    points = singular_points(params, tol).branch_points(which)
    if not points:
        raise BranchAbsentError(f"branch {which} is absent for sin(sigma) = {params.sin_sigma:.6g}")
    theta = cmath.phase(points[0])
    if abs(math.cos(2.0 * theta)) < 1e-14:
        return 0.0
    derivative = phi_derivative(theta, method=method)
    return 1.0 / (4.0 * (1.0 + derivative) ** 2)


def _numerator(
    z0: complex,
    f_plus: complex,
    f_minus: complex,
    lam_plus: complex,
    phi0: QubitState,
    x: int,
) -> NDArray[np.complex128]:
    alpha, beta = phi0.left_amp, phi0.right_amp
    if x == 0:
        return np.array([alpha - beta * f_plus, alpha * f_minus + beta], dtype=np.complex128)
    if x >= 1:
        scale = -(lam_plus ** (x - 1)) * (alpha * f_minus + beta)
        return scale * np.array([lam_plus * f_plus, z0], dtype=np.complex128)
    lam_minus = -lam_plus
    scale = lam_minus ** (-x - 1) * (alpha - beta * f_plus)
    return scale * np.array([z0, lam_minus * f_minus], dtype=np.complex128)


def residue_vector(
    params: ModelParams, z0: complex, phi0: QubitState, x: int
) -> NDArray[np.complex128]:
    """Res(Xi_x(z) phi0; z = z0) = -z0 N(z0) / (2 (1 + d phi~/d theta))."""
    kernel = GFKernel(params)
    theta = cmath.phase(z0)
    numerator = _numerator(
        z0,
        kernel.f0(theta, PLUS),
        kernel.f0(theta, MINUS),
        kernel.lambda_tilde(theta, PLUS),
        phi0,
        x,
    )
    derivative = phi_derivative(theta)
    if math.isinf(derivative):
        return np.zeros(2, dtype=np.complex128)
    return -z0 * numerator / (2.0 * (1.0 + derivative))


def numeric_residue(
    params: ModelParams,
    z0: complex,
    phi0: QubitState,
    x: int = 0,
    distances: Sequence[float] = RESIDUE_DISTANCES,
) -> NDArray[np.complex128]:
    """
    lim (z - z0) Xi_x(z) phi0 along the inward radius, Richardson-extrapolated.

    ``distances`` must be three values, each a tenth of the previous.
    """
    if len(distances) != 3:
        raise ValueError("numeric_residue needs exactly three radial distances")
    phi = phi0.as_array()
    samples = []
    for h in distances:
        z = (1.0 - h) * z0
        samples.append((z - z0) * (xi_tilde_interior(z, params, x) @ phi))
    first = (10.0 * samples[1] - samples[0]) / 9.0
    second = (10.0 * samples[2] - samples[1]) / 9.0
    return (100.0 * second - first) / 99.0


def _cross_term(params: ModelParams, phi0: QubitState) -> float:
    """Re(i e^{-i sigma~} alpha conj(beta))."""
    value = 1j * cmath.exp(-1j * params.sigma_tilde) * phi0.left_amp * phi0.right_amp.conjugate()
    return value.real


def limit_branches(
    params: ModelParams, phi0: QubitState, x: int, tol: float = BRANCH_TOLERANCE
) -> Tuple[Optional[float], Optional[float]]:
    """(nu+(x), nu-(x)), with None for a branch whose sigma-gate is closed."""
    phi0.require_normalized(DEFAULT_TOLERANCE)
    s = params.sin_sigma
    cross = _cross_term(params, phi0)

    def nu(sign: int) -> float:
        prefactor = ((1.0 + sign * SQRT2 * s) / (3.0 + sign * 2.0 * SQRT2 * s)) ** 2
        bracket = max(1.0 - sign * 2.0 * cross, 0.0)
        if x == 0:
            return prefactor * bracket
        rho = 1.0 / (3.0 + sign * 2.0 * SQRT2 * s)
        return prefactor * bracket * (2.0 + sign * SQRT2 * s) * rho ** abs(x)

    nu_plus = nu(1) if _plus_branch_active(params, tol) else None
    nu_minus = nu(-1) if _minus_branch_active(params, tol) else None
    return nu_plus, nu_minus


def limit_measure(
    params: ModelParams, phi0: QubitState, x: int, tol: float = BRANCH_TOLERANCE
) -> float:
    """Time-averaged limit measure as the sum of the active nu branches."""
    nu_plus, nu_minus = limit_branches(params, phi0, x, tol)
    return (nu_plus or 0.0) + (nu_minus or 0.0)


def limit_total_mass(params: ModelParams, phi0: QubitState, tol: float = BRANCH_TOLERANCE) -> float:
    """
    Closed-form sum over x of the limit measure:
    sum over active branches of (1 +- sqrt2 s)/(3 +- 2 sqrt2 s) {1 -+ 2 X}.
    """
    phi0.require_normalized(DEFAULT_TOLERANCE)
    s = params.sin_sigma
    cross = _cross_term(params, phi0)
    total = 0.0
    if _plus_branch_active(params, tol):
        total += (1.0 + SQRT2 * s) / (3.0 + 2.0 * SQRT2 * s) * (1.0 - 2.0 * cross)
    if _minus_branch_active(params, tol):
        total += (1.0 - SQRT2 * s) / (3.0 - 2.0 * SQRT2 * s) * (1.0 + 2.0 * cross)
    return total


def limit_measure_from_residues(
    params: ModelParams,
    phi0: QubitState,
    x: int,
    route: str = "closed_form",
    tol: float = BRANCH_TOLERANCE,
) -> float:
    """
    Limit measure assembled pole by pole.

    Args:
        route: "closed_form" uses the closed residue norms, "derivative" uses
            1/(4|1 + d phi~/d theta|^2), "finite_difference" the same with a
            numerical derivative.
    """
    phi0.require_normalized(DEFAULT_TOLERANCE)
    alpha, beta = phi0.left_amp, phi0.right_amp
    kernel = GFKernel(params)
    sset = singular_points(params, tol)

    total = 0.0
    for which in BRANCHES:
        points = sset.branch_points(which)
        if not points:
            continue
        if route == "closed_form":
            norm_sq = residue_norm_sq(params, which, tol)
        elif route == "derivative":
            norm_sq = residue_norm_sq_from_derivative(params, which, "closed", tol)
        elif route == "finite_difference":
            norm_sq = residue_norm_sq_from_derivative(params, which, "finite_difference", tol)
        else:
            raise ValueError(f"unknown residue route: {route!r}")

        for z0 in points:
            theta = cmath.phase(z0)
            f_plus = kernel.f0(theta, PLUS)
            f_minus = kernel.f0(theta, MINUS)
            if x == 0:
                bracket = (
                    1.0
                    - (alpha.conjugate() * beta * f_plus).real
                    + (alpha * beta.conjugate() * f_minus).real
                )
                total += 2.0 * norm_sq * bracket
                continue
            lam_sq = abs(kernel.lambda_tilde(theta, PLUS if x > 0 else MINUS)) ** 2
            if x > 0:
                weight = 1.0 + 2.0 * (alpha * beta.conjugate() * f_minus).real
            else:
                weight = 1.0 - 2.0 * (alpha.conjugate() * beta * f_plus).real
            total += norm_sq * lam_sq ** (abs(x) - 1) * (1.0 + lam_sq) * weight
    return total


@dataclass(frozen=True)
class RemarkTerm:
    label: str
    computed: float
    predicted: float


def remark_cross_terms(params: ModelParams, phi0: QubitState) -> List[RemarkTerm]:
    """
    Re[conj(alpha) beta f0+] and Re[alpha conj(beta) f0-] at theta1(+) and theta2(+).

    Predicted values are -+ab sin(sigma~ - phi12) at theta1 and the opposite at theta2.
    """
    polar = phi0.polar()
    base = polar.a * polar.b * math.sin(params.sigma_tilde - polar.phi12)
    alpha, beta = phi0.left_amp, phi0.right_amp
    kernel = GFKernel(params)
    sset = singular_points(params)

    terms = []
    for which, sign in ((THETA1, 1.0), (THETA2, -1.0)):
        points = sset.branch_points(which)
        if not points:
            continue
        theta = cmath.phase(points[0])
        f_plus = kernel.f0(theta, PLUS)
        f_minus = kernel.f0(theta, MINUS)
        terms.append(
            RemarkTerm(
                f"{which}:conj(alpha)*beta*f0+",
                (alpha.conjugate() * beta * f_plus).real,
                -sign * base,
            )
        )
        terms.append(
            RemarkTerm(
                f"{which}:alpha*conj(beta)*f0-",
                (alpha * beta.conjugate() * f_minus).real,
                sign * base,
            )
        )
    return terms


def _cos_psi(theta: NDArray[np.float64], sigma: float) -> NDArray[np.float64]:
    """cos(theta + sigma + phi~(theta)) on arc points; Lambda0 = 2 cos(psi) e^{i psi}."""
    sin_t = np.sin(theta)
    cos_phi = SQRT2 * np.cos(theta)
    sin_phi = np.sign(sin_t) * np.sqrt(np.clip(-np.cos(2.0 * theta), 0.0, None))
    shifted = theta + sigma
    return np.cos(shifted) * cos_phi - np.sin(shifted) * sin_phi


def scan_singular_points(
    params: ModelParams, n: int = 1_000_000, endpoint_tol: float = 1e-6
) -> List[complex]:
    """
    Brute-force zeros of Lambda0 on the localization arcs.

    Sign changes of cos(psi) on an n-point grid are refined with brentq.
    The sliver between each arc endpoint and its first grid point is
    bracketed on its own, and zeros on the endpoints themselves are caught
    by value.
    """
    sigma = params.sigma
    grid = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    on_arc = np.abs(np.sin(grid)) >= INV_SQRT2
    values = np.where(on_arc, _cos_psi(grid, sigma), np.nan)

    pair_ok = on_arc[:-1] & on_arc[1:]
    crossing = pair_ok & (values[:-1] * values[1:] <= 0.0)
    hits = np.nonzero(crossing)[0]

    def scalar(t: float) -> float:
        return float(_cos_psi(np.array([t]), sigma)[0])

    roots: List[float] = []
    for i in hits:
        lo, hi = float(grid[i]), float(grid[i + 1])
        if values[i] == 0.0:
            roots.append(lo)
        elif values[i + 1] == 0.0:
            roots.append(hi)
        else:
            roots.append(brentq(scalar, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))

    spacing = 2.0 * math.pi / n
    for theta, inward in ARC_ENDPOINTS:
        edge = scalar(theta)
        if 2.0 * abs(edge) < endpoint_tol:
            roots.append(theta)
            continue
        inner = theta + inward * spacing
        if edge * scalar(inner) < 0.0:
            lo, hi = min(theta, inner), max(theta, inner)
            roots.append(brentq(scalar, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))

    zs: List[complex] = []
    for theta in sorted(roots):
        z = cmath.exp(1j * theta)
        if all(abs(z - other) > 1e-9 for other in zs):
            zs.append(z)
    logger.debug("scan_singular_points: %d zeros on a %d-point grid", len(zs), n)
    return zs


def scan_mismatches(
    scanned: Sequence[complex], sset: SingularSet, tol: float = 1e-6
) -> Dict[str, List[complex]]:
    """
    Compare a scan with the closed-form set.

    "extra" holds scanned zeros with no closed-form partner, "missed" the
    closed-form points the scan never found.
    """
    closed = [z for _, z in sset.points()]
    extra = [z for z in scanned if all(abs(z - w) > tol for w in closed)]
    missed = [w for w in closed if all(abs(z - w) > tol for z in scanned)]
    return {"extra": extra, "missed": missed}


def min_lambda_away_from_zeros(
    params: ModelParams, zeros: Sequence[complex], n: int = 1_000_000, exclusion: float = 1e-3
) -> float:
    """Smallest |Lambda0| over arc grid points at least ``exclusion`` radians from every zero."""
    grid = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    keep = np.abs(np.sin(grid)) >= INV_SQRT2
    for z in zeros:
        theta = cmath.phase(z)
        distance = np.abs(np.angle(np.exp(1j * (grid - theta))))
        keep &= distance >= exclusion
    if not np.any(keep):
        return math.inf
    return float(np.min(2.0 * np.abs(_cos_psi(grid[keep], params.sigma))))


def sufficient_correspondence_condition(params: ModelParams, tol: float = 1e-9) -> bool:
    """sigma- = n pi or sigma+ + sigma- = (2n + 1) pi."""

    def near_integer(v: float) -> bool:
        return abs(v - round(v)) < tol

    return near_integer(params.sigma_minus / math.pi) or near_integer(
        (params.sigma_plus + params.sigma_minus - math.pi) / (2.0 * math.pi)
    )


@dataclass(frozen=True)
class CorrespondenceRow:
    x: int
    nu_plus: float
    stationary_j1_scaled: float
    nu_minus: float
    stationary_j3_scaled: float

    @property
    def gap_plus(self) -> float:
        return abs(self.nu_plus - self.stationary_j1_scaled)

    @property
    def gap_minus(self) -> float:
        return abs(self.nu_minus - self.stationary_j3_scaled)


def correspondence_rows(
    params: ModelParams, phi0: QubitState, x_max: int
) -> List[CorrespondenceRow]:
    """
    nu+ next to the j=1 stationary measure and nu- next to j=3, with |c|^2 = nu(0).

    Inactive branches are reported as zero.
    """
    plus0, minus0 = limit_branches(params, phi0, 0)
    pair1 = eigenpair(params, 1, math.sqrt(max(plus0 or 0.0, 0.0)))
    pair3 = eigenpair(params, 3, math.sqrt(max(minus0 or 0.0, 0.0)))

    rows = []
    for x in range(-x_max, x_max + 1):
        nu_plus, nu_minus = limit_branches(params, phi0, x)
        rows.append(
            CorrespondenceRow(
                x=x,
                nu_plus=nu_plus or 0.0,
                stationary_j1_scaled=stationary_measure(pair1, params, x),
                nu_minus=nu_minus or 0.0,
                stationary_j3_scaled=stationary_measure(pair3, params, x),
            )
        )
    return rows
