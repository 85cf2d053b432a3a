"""
Closed-form geometry of paraboloid segments and sectors

The solid is the segment {x² + y² <= z <= a}. A waterplane {z = bx + c} with b <= 0
is parameterized by the abscissa X where it meets the basis circle plane z = a,
so that c = a - bX. The part of the segment on the dry side of the plane is the
difference of two sectors:

- the right sector P₁ = P ∩ {x >= X}, volume V₁ = V(a, X);
- the oblique sector P₂ = P₁ ∩ {z <= bx + c}, which a volume-preserving shear maps
  onto a right sector of a wider segment, so V₂ = V(a', X').

Every quantity here is dimensionless and a pure function of its inputs.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from config import DEGENERATE_AREA_TOLERANCE

from .errors import DegenerateError, DomainError

logger = logging.getLogger(__name__)

# Nearly empty sectors (X > 0, A/X² small) lose all digits in the closed form, so the
# volume is summed from its expansion in u = A/X² instead
SERIES_THRESHOLD = 0.25
SERIES_TERMS = 40
_k = np.arange(SERIES_TERMS)
SERIES_COEFFICIENTS = (-1.0) ** _k / ((2 * _k + 1) * (2 * _k + 3) * (2 * _k + 5))


class Side(str, Enum):
    """Which side of the waterplane is dry"""

    LEFT_HAND = "left"
    RIGHT_HAND = "right"
    HORIZONTAL = "horizontal"


@dataclass(frozen=True)
class SegmentShape:
    """The paraboloid segment {x² + y² <= z <= a}"""

    a: float

    def __post_init__(self):
        if not math.isfinite(self.a) or self.a <= 0:
            raise DomainError(f"axis length must be a positive finite number, got a={self.a}")

    @classmethod
    def from_base_angle(cls, degrees: float) -> "SegmentShape":
        """Build the segment from the base angle φ in degrees, a = tan²(φ)/4"""
        if not 0 < degrees < 90:
            raise DomainError(f"base angle must lie in (0, 90) degrees, got {degrees}")
        return cls(math.tan(math.radians(degrees)) ** 2 / 4)

    @property
    def sqrt_a(self) -> float:
        return math.sqrt(self.a)

    @property
    def volume(self) -> float:
        return self.a * self.a * math.pi / 2

    @property
    def centroid_z(self) -> float:
        return 2 * self.a / 3


@dataclass(frozen=True)
class WaterPlane:
    """
    The plane {z = bx + c} with c = a - bX.

    The intercept is never stored; it depends on the segment and is recomputed
    from (X, b) by intercept().
    """

    b: float
    X: float
    side: Side = Side.LEFT_HAND

    def __post_init__(self):
        if not (math.isfinite(self.b) and math.isfinite(self.X)):
            raise DomainError(f"waterplane parameters must be finite, got X={self.X}, b={self.b}")
        if self.b > 0:
            raise DomainError(f"waterplane slope must satisfy b <= 0, got b={self.b}")
        if self.side is Side.HORIZONTAL:
            raise DomainError("a waterplane is either left hand or right hand")

    @classmethod
    def non_archimedean(cls, shape: SegmentShape, X: float, b: float, side: Side = Side.LEFT_HAND) -> "WaterPlane":
        """Build a plane that cuts through the basis circle, enforcing -√a < X < √a"""
        if not -shape.sqrt_a < X < shape.sqrt_a:
            raise DomainError(f"X={X} outside (-√a, √a) = ({-shape.sqrt_a}, {shape.sqrt_a})")
        return cls(b=b, X=X, side=side)

    def intercept(self, shape: SegmentShape) -> float:
        return shape.a - self.b * self.X


@dataclass(frozen=True)
class DerivedGeometry:
    """Quantities shared by nearly every formula of the non-archimedean case"""

    a: float
    X: float
    b: float
    A: float
    a_prime: float
    X_prime: float
    beta: float
    f: float

    @property
    def c(self) -> float:
        return self.a - self.b * self.X

    @property
    def A52(self) -> float:
        return self.A**2.5


@dataclass(frozen=True)
class SectorMoments:
    """Volume and the first moments x·V and z·V of a sector"""

    volume: float
    moment_x: float
    moment_z: float

    @property
    def centroid(self) -> tuple[float, float]:
        if self.volume <= 0:
            raise DegenerateError("centroid of an empty sector is undefined")
        return self.moment_x / self.volume, self.moment_z / self.volume


def derived_geometry(shape: SegmentShape, plane: WaterPlane) -> DerivedGeometry:
    """
    Compute A, a', X', β and f for a non-archimedean plane.

    Raises:
        DomainError: If X is not inside (-√a, √a)
    """
    a, X, b = shape.a, plane.X, plane.b
    if not -shape.sqrt_a < X < shape.sqrt_a:
        raise DomainError(f"X={X} outside (-√a, √a) for a={a}")
    A = a - X * X
    if A <= 0:
        raise DomainError(f"A = a - X² = {A} is not positive")
    return DerivedGeometry(
        a=a,
        X=X,
        b=b,
        A=A,
        a_prime=b * b / 4 - b * X + a,
        X_prime=X - b / 2,
        beta=math.hypot(b, 1.0),
        f=5 * b * b / 12 - 2 * b * X / 3 + 0.5,
    )


def _sector_volume(a: float, X: float, A: float) -> float:
    """V(a, X) for 0 < A = a - X²"""
    root_A = math.sqrt(A)
    if X > 0:
        # X² underflows for subnormal X; the ratio only overflows to inf
        ratio = root_A / X
        u = ratio * ratio
        if u <= SERIES_THRESHOLD:
            return 4 * A * A * root_A / X * float(np.polynomial.polynomial.polyval(u, SERIES_COEFFICIENTS))
        # π/2 - arctan(X/√A) without the cancellation of two nearly equal angles
        angle = math.atan(ratio)
    else:
        angle = math.pi / 2 - math.atan2(X, root_A)
    return a * a / 2 * angle + (2 * X**3 - 5 * a * X) / 6 * root_A


def _checked_area(a: float, X: float) -> float:
    """Return A = a - X², clamped to 0 at the endpoints ±√a"""
    if not (math.isfinite(a) and a > 0):
        raise DomainError(f"axis length must be positive, got a={a}")
    A = a - X * X
    if A < -DEGENERATE_AREA_TOLERANCE * a:
        raise DomainError(f"X={X} outside [-√a, √a] for a={a}")
    return A if A > DEGENERATE_AREA_TOLERANCE * a else 0.0


def right_sector_volume(a: float, X: float) -> float:
    """
    Volume V(a, X) of the right sector {x² + y² <= z <= a, x >= X}.

    The endpoints are allowed: V(a, √a) = 0 and V(a, -√a) = a²π/2.
    """
    A = _checked_area(a, X)
    if A == 0.0:
        return 0.0 if X > 0 else a * a * math.pi / 2
    return _sector_volume(a, X, A)


def sector_volume_derivatives(a: float, X: float) -> tuple[float, float]:
    """Return (∂V/∂X, ∂V/∂a) of the right sector volume"""
    A = _checked_area(a, X)
    A32 = A**1.5
    return -4.0 / 3.0 * A32, 2 * right_sector_volume(a, X) / a + 2 * X * A32 / (3 * a)


def oblique_sector_volume(geom: DerivedGeometry) -> float:
    """V₂ = V(a', X') using the A shared by both sectors"""
    return _sector_volume(geom.a_prime, geom.X_prime, geom.A)


def right_sector_moments(a: float, X: float) -> SectorMoments:
    A = _checked_area(a, X)
    volume = right_sector_volume(a, X)
    A52 = A**2.5
    return SectorMoments(
        volume=volume,
        moment_x=4.0 / 15.0 * A52,
        moment_z=2 * a / 3 * volume + 4 * X / 45 * A52,
    )


def oblique_sector_moments(geom: DerivedGeometry) -> SectorMoments:
    a, X, b = geom.a, geom.X, geom.b
    volume = oblique_sector_volume(geom)
    A52 = geom.A52
    return SectorMoments(
        volume=volume,
        moment_x=b / 2 * volume + 4.0 / 15.0 * A52,
        moment_z=(5 * b * b / 12 - 2 * b * X / 3 + 2 * a / 3) * volume + (4 * X / 45 + 2 * b / 9) * A52,
    )


def submerged_centroid(shape: SegmentShape, plane: WaterPlane) -> tuple[float, float, float]:
    """
    Centroid (x', z') and volume of the submerged part P ∩ {z >= bx + c}.

    Raises:
        DegenerateError: If the submerged part is empty
    """
    geom = derived_geometry(shape, plane)
    right = right_sector_moments(shape.a, plane.X)
    oblique = oblique_sector_moments(geom)
    volume = right.volume - oblique.volume
    if volume <= DEGENERATE_AREA_TOLERANCE * shape.volume:
        raise DegenerateError(f"submerged part is empty at X={plane.X}, b={plane.b}")
    x = (right.moment_x - oblique.moment_x) / volume
    z = (right.moment_z - oblique.moment_z) / volume
    return x, z, volume


def equilibrium_offset(shape: SegmentShape, plane: WaterPlane) -> float:
    """
    Residual (2a/3 - z')·b - x' of the centroid alignment.

    Zero exactly when the segment's centroid B and the buoyancy centre B' lie on a
    normal of the waterplane.
    """
    x, z, _ = submerged_centroid(shape, plane)
    return (shape.centroid_z - z) * plane.b - x


def archimedean_valid(shape: SegmentShape, b: float, c: float, tol: float = 1e-12) -> bool:
    """True when {z = bx + c} meets the basis circle in at most one point, a >= -b√a + c"""
    return shape.a >= -b * shape.sqrt_a + c - tol * max(1.0, shape.a)


def archimedean_density_bounds(a: float) -> Optional[tuple[float, float]]:
    """
    Bounds on √σ for a valid tilted archimedean position when a > 15/8.

    A tilted position is valid iff √σ <= low or √σ >= high. Returns None for
    a <= 15/8, where every tilted solution is valid.
    """
    if a <= 15 / 8:
        return None
    centre = 13 / 25 - 3 / (10 * a)
    spread = 6 / 5 * math.sqrt(max(4 / 25 - 3 / (10 * a), 0.0))
    return centre - spread, centre + spread
