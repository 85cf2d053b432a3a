"""
Floating and equilibrium conditions of the non-archimedean case

A position (X, b) is an equilibrium of a segment with relative density σ iff

    F = V₁ - V₂ - σV = 0          (floating condition)
    E = f·V₂ + (2b/9)·A^(5/2) = 0  (equilibrium condition)

with f = 5b²/12 - 2bX/3 + 1/2. E does not depend on σ, so for fixed X its zeros
in b are isolated first and σ follows from the floating condition. The
normalized function Ẽ = E/(f·a'²) has a rational b-derivative whose numerator is
the cubic P below; the negative zeros of P bracket the zeros of E.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from config import DOUBLE_ROOT_TOLERANCE, MAX_BRACKET_DOUBLINGS, POLE_TOLERANCE, POLYNOMIAL_CERTIFICATE_FACTOR

from .errors import DomainError, InvalidDensity, PoleError
from .geometry import (
    SegmentShape,
    WaterPlane,
    derived_geometry,
    oblique_sector_volume,
    right_sector_volume,
)

logger = logging.getLogger(__name__)

# f has real zeros iff 16X² >= 30
POLE_THRESHOLD = -math.sqrt(15 / 8)


@dataclass(frozen=True)
class ConditionEval:
    E: float
    F: float
    E_tilde: Optional[float]
    sigma_implied: float


@dataclass(frozen=True)
class FPoles:
    """Zeros b1 <= b2 < 0 of f(b) for fixed X; both None when they do not exist"""

    b1: Optional[float]
    b2: Optional[float]
    exists: bool


@dataclass(frozen=True)
class BracketPolynomial:
    """
    P(b) = 6X·b³ + (21 - 10a)·b² - 36X·b + 12a + 18 and its negative zeros.

    coefficients are ordered from the cubic term down to the constant.
    """

    coefficients: tuple[float, float, float, float]
    negative_roots: tuple[float, ...]
    double_root: bool = False

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial(self.coefficients[::-1])

    def __call__(self, b: float) -> float:
        return float(self.polynomial(b))


def validate_density(sigma: float) -> float:
    if not (math.isfinite(sigma) and 0 < sigma < 1):
        raise InvalidDensity(f"density must lie in (0,1), got {sigma}")
    return sigma


def f_value(X: float, b: float) -> float:
    return 5 * b * b / 12 - 2 * b * X / 3 + 0.5


def sigma_implied(shape: SegmentShape, plane: WaterPlane) -> float:
    """Density (V₁ - V₂)/V for which the plane is a floating waterline"""
    geom = derived_geometry(shape, plane)
    return (right_sector_volume(shape.a, plane.X) - oblique_sector_volume(geom)) / shape.volume


def equilibrium_E(shape: SegmentShape, plane: WaterPlane) -> float:
    geom = derived_geometry(shape, plane)
    return geom.f * oblique_sector_volume(geom) + 2 * geom.b / 9 * geom.A52


def floating_F(shape: SegmentShape, plane: WaterPlane, sigma: float) -> float:
    """
    Floating condition V₁ - V₂ - σV.

    Right-hand callers pass the effective density 1 - σ.
    """
    validate_density(sigma)
    return (sigma_implied(shape, plane) - sigma) * shape.volume


def evaluate_conditions(shape: SegmentShape, plane: WaterPlane, sigma: float) -> ConditionEval:
    validate_density(sigma)
    geom = derived_geometry(shape, plane)
    V1 = right_sector_volume(shape.a, plane.X)
    V2 = oblique_sector_volume(geom)
    E = geom.f * V2 + 2 * geom.b / 9 * geom.A52
    implied = (V1 - V2) / shape.volume
    scale = geom.f * geom.a_prime**2
    return ConditionEval(
        E=E,
        F=(implied - sigma) * shape.volume,
        E_tilde=E / scale if abs(geom.f) >= POLE_TOLERANCE else None,
        sigma_implied=implied,
    )


def e_tilde_and_derivative(shape: SegmentShape, X: float, b: float) -> tuple[float, float]:
    """
    Return Ẽ = E/(f·a'²) and ∂Ẽ/∂b = P·A^(5/2)/(108·a'³·f²).

    Raises:
        PoleError: If f vanishes at (X, b)
    """
    if b >= 0:
        raise DomainError(f"the normalized equilibrium function needs b < 0, got b={b}")
    geom = derived_geometry(shape, WaterPlane.non_archimedean(shape, X, b))
    if abs(geom.f) < POLE_TOLERANCE:
        raise PoleError(f"f vanishes at X={X}, b={b}")
    E = geom.f * oblique_sector_volume(geom) + 2 * b / 9 * geom.A52
    a_prime = geom.a_prime
    P = _polynomial(shape.a, X)(b)
    return E / (geom.f * a_prime**2), float(P) * geom.A52 / (108 * a_prime**3 * geom.f**2)


def f_poles(X: float) -> FPoles:
    if X > POLE_THRESHOLD:
        return FPoles(b1=None, b2=None, exists=False)
    spread = math.sqrt(max(16 * X * X - 30, 0.0)) / 5
    return FPoles(b1=4 * X / 5 - spread, b2=4 * X / 5 + spread, exists=True)


def _polynomial(a: float, X: float) -> Polynomial:
    return Polynomial([12 * a + 18, -36 * X, 21 - 10 * a, 6 * X])


def _sign(value: float) -> int:
    return int(np.sign(value))


def _lower_bound(poly: Polynomial, start: float) -> float:
    """Walk down from start by doubling steps until P takes its sign at -∞"""
    degree = poly.degree()
    sign_at_minus_infinity = _sign(poly.coef[-1]) * (-1) ** degree
    step = 1.0
    bound = start - step
    for _ in range(MAX_BRACKET_DOUBLINGS):
        if _sign(poly(bound)) == sign_at_minus_infinity:
            return bound
        step *= 2
        bound = start - step
    logger.warning(f"no sign change of P found below {start} after {MAX_BRACKET_DOUBLINGS} doublings")
    return bound


def _polish(poly: Polynomial, root: float, lo: float, hi: float) -> float:
    """A few Newton steps that stay inside [lo, hi] and never increase |P|"""
    deriv = poly.deriv()
    best, best_value = root, abs(poly(root))
    for _ in range(3):
        slope = deriv(best)
        if slope == 0:
            break
        candidate = best - poly(best) / slope
        if not lo <= candidate <= hi or abs(poly(candidate)) >= best_value:
            break
        best, best_value = candidate, abs(poly(candidate))
    return float(best)


def bracket_polynomial(shape: SegmentShape, X: float) -> BracketPolynomial:
    """
    Isolate the negative zeros of P.

    The stationary points of P split (-∞, 0) into monotone pieces; each piece with
    a sign change holds exactly one zero, found by Brent's method and polished by
    Newton. Zeros closer than the double-root tolerance are merged into one double
    root, as is a stationary point where P itself vanishes.
    """
    a = shape.a
    full = _polynomial(a, X)
    coefficients = (6 * X, 21 - 10 * a, -36 * X, 12 * a + 18)
    scale = float(np.sum(np.abs(full.coef)))
    # Only exact zeros are dropped; a tiny cubic term still carries a far root
    poly = full.trim()
    if poly.degree() == 0:
        return BracketPolynomial(coefficients=coefficients, negative_roots=())

    def certified(r: float) -> bool:
        return abs(full(r)) <= POLYNOMIAL_CERTIFICATE_FACTOR * scale * max(1.0, abs(r)) ** 3

    stationary = sorted(
        float(r.real)
        for r in np.atleast_1d(poly.deriv().roots())
        if abs(r.imag) <= 1e-12 * max(1.0, abs(r)) and r.real < 0
    )
    lower = _lower_bound(poly, min([-1.0] + stationary))
    knots = [lower] + stationary + [0.0]

    roots: list[float] = []
    changed: list[bool] = []
    double = False
    for lo, hi in zip(knots, knots[1:]):
        has_change = bool(poly(lo) * poly(hi) < 0)
        changed.append(has_change)
        if has_change:
            root = brentq(poly, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            roots.append(_polish(poly, root, lo, hi))
    # A stationary point touching zero without a sign change on either side is a double root
    for i, s in enumerate(stationary, start=1):
        if certified(s) and not changed[i - 1] and not changed[i]:
            roots.append(s)
            double = True
    roots.sort()

    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= DOUBLE_ROOT_TOLERANCE:
            merged[-1] = (merged[-1] + r) / 2
            double = True
        else:
            merged.append(r)

    for r in merged:
        if not certified(r):
            logger.warning(f"bracket polynomial root {r} at a={a}, X={X} fails certification |P|={abs(full(r)):.3e}")
    logger.debug(f"bracket polynomial a={a}, X={X}: negative roots {merged}")
    return BracketPolynomial(coefficients=coefficients, negative_roots=tuple(merged), double_root=double)
