"""
Potential energy, its derivatives and the classification of equilibria

Equilibria are exactly the stationary points of the potential U, so the Hessian
of U decides their stability: positive definite means stable, indefinite means a
saddle. A singular Hessian is resolved by the third derivative of U along the
null direction, where a non-vanishing cubic term always admits descent.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config import CUBIC_PROBE_STEP, CUBIC_PROBE_THRESHOLD, EIGEN_TOLERANCE_FACTOR

from .errors import DomainError, ProbeError, StencilError
from .geometry import (
    SegmentShape,
    WaterPlane,
    archimedean_valid,
    derived_geometry,
    oblique_sector_volume,
    right_sector_volume,
)
from .models import DegenerateDetail, Resolution, StabilityKind, StabilityVerdict
from .oracle import fd_directional_third

logger = logging.getLogger(__name__)

# The horizontal position is stable exactly above this axis length
HORIZONTAL_THRESHOLD = 35 / 12
# U - U₀ ~ coefficient·X⁴ along the null direction of the horizontal form at a = 35/12
HORIZONTAL_QUARTIC = -79 * math.sqrt(105) / 3969


@dataclass(frozen=True)
class PotentialEval:
    """
    U with its analytic gradient and Hessian.

    aux holds (F₁, E₁), the parts of ∂²U/∂b² that vanish at an equilibrium;
    equilibrium_hessian is the Hessian with every F and E term dropped.
    """

    U: float
    grad: tuple[float, float]
    hessian: np.ndarray
    aux: tuple[float, float]
    equilibrium_hessian: np.ndarray


def _symmetric(h00: float, h01: float, h11: float) -> np.ndarray:
    return np.array([[h00, h01], [h01, h11]], dtype=float)


def potential_nonarchimedean(shape: SegmentShape, X: float, b: float, sigma: float) -> PotentialEval:
    """
    Potential of a left-hand position in the non-archimedean case, as a function
    of (X, b).

    Raises:
        DomainError: If b >= 0 or X is outside (-√a, √a)
    """
    if b >= 0:
        raise DomainError(f"non-archimedean potential needs b < 0, got b={b}")
    geom = derived_geometry(shape, WaterPlane.non_archimedean(shape, X, b))
    a, A, a_p, X_p, beta = shape.a, geom.A, geom.a_prime, geom.X_prime, geom.beta
    V = shape.volume
    V1 = right_sector_volume(a, X)
    V2 = oblique_sector_volume(geom)
    A52 = geom.A52
    F = V1 - V2 - sigma * V
    E = geom.f * V2 + 2 * b / 9 * A52

    U = ((a / 3 - b * X) * (sigma * V - V1) + a_p / 3 * V2 - 2 * b * A52 / 9) / beta
    grad = (b * F / beta, (b * E + (X + b * a / 3) * F) / beta**3)

    U_XX = 2 * b * b / (3 * a_p * beta) * (3 * V2 + X_p * A**1.5)
    U_Xb_eq = (b * b + 6) / (4 * a_p * beta) * V2
    U_Xb = U_Xb_eq + F / beta**3 - 3 * E / (a_p * beta)
    poly = -2 * X * b**4 + (4 * a - 7) * b**3 + 14 * X * b * b - 6 * b + 12 * X
    U_bb_eq = poly * V2 / (8 * a_p * b * beta**3)
    F1 = (-2 * a * b * b - 9 * X * b + a) * F / (3 * beta**5)
    E1 = (
        (4 * b**5 - 4 * X * b**4 + (13 - 8 * a) * b**3 - 28 * X * b * b + (4 * a + 6) * b - 12 * X)
        * E
        / (4 * a_p * b * beta**5)
    )
    return PotentialEval(
        U=U,
        grad=grad,
        hessian=_symmetric(U_XX, U_Xb, U_bb_eq + F1 + E1),
        aux=(F1, E1),
        equilibrium_hessian=_symmetric(U_XX, U_Xb_eq, U_bb_eq),
    )


def equilibrium_hessian(shape: SegmentShape, X: float, b: float) -> np.ndarray:
    """
    Hessian of U at a point where E = F = 0.

    It does not depend on σ, so it can be tracked along a branch of E = 0 before
    any density is chosen.
    """
    # σ only enters through F, which is dropped here
    return potential_nonarchimedean(shape, X, b, 0.5).equilibrium_hessian


def potential_archimedean(shape: SegmentShape, c: float, b: float, sigma: float) -> PotentialEval:
    """
    Potential of a right-hand archimedean position as a function of (c, b).

    Left-hand positions use the same function with σ* = 1 - σ.

    Raises:
        DomainError: If b > 0, the plane cuts through the basis circle or the
            submerged part is empty
    """
    if b > 0:
        raise DomainError(f"waterplane slope must satisfy b <= 0, got b={b}")
    if not archimedean_valid(shape, b, c):
        raise DomainError(f"plane z = {b}x + {c} cuts through the basis circle")
    a = shape.a
    a_p = b * b / 4 + c
    if a_p <= 0:
        raise DomainError(f"submerged part is empty for c={c}, b={b}")
    beta = math.hypot(b, 1.0)
    V = shape.volume
    V_sub = a_p * a_p * math.pi / 2
    f = 5 * b * b / 12 + 2 * (c - a) / 3 + 0.5
    F0 = V_sub - sigma * V
    E0 = f * V_sub
    lever = (2 * a / 3 - c) * F0 + E0

    U = ((2 * a / 3 - c) * sigma * V + a_p * V_sub / 3) / beta
    grad = (F0 / beta, b / beta**3 * lever)
    U_cc = 2 * V_sub / (a_p * beta)
    U_cb = b / beta * (V_sub / a_p - F0 / beta**2)
    U_bb = b * b * V_sub / (a_p * beta**3) * (5 * b * b / 8 + (c + 1) / 2) + (1 - 2 * b * b) / beta**5 * lever
    hessian = _symmetric(U_cc, U_cb, U_bb)
    return PotentialEval(U=U, grad=grad, hessian=hessian, aux=(0.0, 0.0), equilibrium_hessian=hessian)


def symmetric_eigenvalues(hessian: np.ndarray) -> tuple[float, float]:
    """Closed-form eigenvalues (λ_min, λ_max) of a symmetric 2×2 matrix"""
    h00, h01, h11 = float(hessian[0, 0]), float(hessian[0, 1]), float(hessian[1, 1])
    mean = (h00 + h11) / 2
    radius = math.hypot((h00 - h11) / 2, h01)
    lam_max = mean + radius
    if lam_max > 0:
        # det/λ_max keeps the digits a small λ_min loses in mean - radius
        return (h00 * h11 - h01 * h01) / lam_max, lam_max
    return mean - radius, lam_max


def classify(
    hessian: np.ndarray,
    probe: Optional[Callable[[np.ndarray], DegenerateDetail]] = None,
) -> StabilityVerdict:
    """
    Classify a stationary point from its Hessian.

    A singular Hessian is handed to probe, when one is given, for the
    higher-order test. A failing probe leaves the verdict inconclusive.
    """
    lam_min, lam_max = symmetric_eigenvalues(hessian)
    tol = EIGEN_TOLERANCE_FACTOR * max(1.0, lam_max)
    if lam_max <= tol:
        logger.warning(f"largest Hessian eigenvalue {lam_max:.3e} is not positive; potential has no rising direction")
    if abs(lam_min) <= tol:
        detail = None
        if probe is not None:
            try:
                detail = probe(hessian)
            except ProbeError as exc:
                logger.warning(f"degenerate probe failed: {exc}")
        return StabilityVerdict(kind=StabilityKind.DEGENERATE, eigenvalues=(lam_min, lam_max), degenerate_detail=detail)
    kind = StabilityKind.STABLE if lam_min > tol else StabilityKind.SADDLE
    return StabilityVerdict(kind=kind, eigenvalues=(lam_min, lam_max))


def substitution_direction(hessian: np.ndarray) -> np.ndarray:
    """
    Direction (λ, 1) of the substitution X = Y + λb that removes the mixed
    second derivative, λ = -U_Xb/U_XX.

    Falls back to the kernel eigenvector when U_XX itself vanishes.
    """
    h00, h01 = float(hessian[0, 0]), float(hessian[0, 1])
    if abs(h00) > EIGEN_TOLERANCE_FACTOR * max(1.0, float(np.max(np.abs(hessian)))):
        return np.array([-h01 / h00, 1.0])
    _, vectors = np.linalg.eigh(hessian)
    return vectors[:, 0]


def degenerate_probe(
    shape: SegmentShape,
    X0: float,
    b0: float,
    sigma: float,
    *,
    potential: Optional[Callable[[float, float], float]] = None,
    hessian: Optional[np.ndarray] = None,
    direction=None,
    step: float = CUBIC_PROBE_STEP,
) -> DegenerateDetail:
    """
    Third derivative of U along the degenerate direction at (X0, b0).

    The stencil runs along the unit null direction; the reported cubic
    coefficient is rescaled to the direction (λ, 1), i.e. it is ∂³U/∂b³ after
    substituting X = Y + λb.

    Raises:
        ProbeError: If a stencil point leaves the domain of U
    """
    if potential is None:

        def potential(X: float, b: float) -> float:
            return potential_nonarchimedean(shape, X, b, sigma).U

    if direction is None:
        if hessian is None:
            hessian = equilibrium_hessian(shape, X0, b0)
        direction = substitution_direction(hessian)
    vector = np.asarray(direction, dtype=float)
    norm = float(np.linalg.norm(vector))
    if norm == 0:
        raise ProbeError("degenerate direction is the zero vector")
    unit = vector / norm
    try:
        third = fd_directional_third(potential, (X0, b0), unit, step)
    except StencilError as exc:
        raise ProbeError(f"cubic probe at X={X0}, b={b0} failed: {exc}") from exc
    cubic = float(third.value) * norm**3
    logger.debug(f"cubic probe at ({X0}, {b0}): {cubic:.8f} (stencil change {third.error_estimate:.2e})")
    resolved = Resolution.UNSTABLE if abs(cubic) > CUBIC_PROBE_THRESHOLD else Resolution.INCONCLUSIVE
    return DegenerateDetail(null_direction=(float(unit[0]), float(unit[1])), cubic_coefficient=cubic, resolved=resolved)


def classify_equilibrium(shape: SegmentShape, X: float, b: float, sigma: float) -> StabilityVerdict:
    """Classify a non-archimedean equilibrium; sigma is the effective density"""
    hessian = equilibrium_hessian(shape, X, b)
    return classify(hessian, probe=lambda h: degenerate_probe(shape, X, b, sigma, hessian=h))


def classify_archimedean(shape: SegmentShape, c: float, b: float, sigma: float) -> StabilityVerdict:
    """
    Classify an archimedean equilibrium; sigma is the effective density.

    The upright position on the boundary a = 3/(4(1 - √σ)) is stable by the
    higher-order argument and is reported as such.
    """
    verdict = classify(potential_archimedean(shape, c, b, sigma).hessian)
    if verdict.kind is StabilityKind.DEGENERATE and b == 0:
        logger.info(f"upright position at a={shape.a}, σ={sigma} lies on the stability boundary; reported stable")
        return StabilityVerdict(kind=StabilityKind.STABLE, eigenvalues=verdict.eigenvalues)
    return verdict


def horizontal_hessian(shape: SegmentShape) -> np.ndarray:
    """Hessian of U - U₀ in (X, Y), Y = 1/X', near the horizontal position"""
    a = shape.a
    return _symmetric(4 * a**1.5 / 3, 4 * a**2.5 / 15, 8 * a**3.5 / 105 - a**2.5 / 15)


def horizontal_reference_potential(a: float) -> float:
    return 4 * a**2.5 / 15


def horizontal_stability(shape: SegmentShape) -> StabilityVerdict:
    """Stable for a > 35/12; unstable below and on the boundary"""
    hessian = horizontal_hessian(shape)
    verdict = classify(hessian)
    on_boundary = abs(shape.a - HORIZONTAL_THRESHOLD) <= 1e-12 * shape.a
    if verdict.kind is not StabilityKind.DEGENERATE and not on_boundary:
        return verdict
    # The cubic term vanishes by symmetry; the quartic term along the kernel is negative
    null = np.array([1.0, -5.0 / shape.a])
    null /= np.linalg.norm(null)
    detail = DegenerateDetail(
        null_direction=(float(null[0]), float(null[1])),
        cubic_coefficient=0.0,
        resolved=Resolution.UNSTABLE,
        quartic_coefficient=HORIZONTAL_QUARTIC,
    )
    return StabilityVerdict(kind=StabilityKind.DEGENERATE, eigenvalues=verdict.eigenvalues, degenerate_detail=detail)
