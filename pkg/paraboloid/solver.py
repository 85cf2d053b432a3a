"""
Equilibrium solver

For a fixed abscissa X the equilibrium condition E = 0 is a scalar equation in b
whose negative zeros are isolated by the stationary points of Ẽ (the negative
zeros of P) and the zeros of f. Each zero then fixes one density through the
floating condition, which turns the global problem "all positions for a given
σ" into following the branches of E = 0 across X and picking the points where
the implied density equals σ.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from config import (
    DENSITY_HALF_TOLERANCE,
    JACOBIAN_STEP,
    MAX_BRACKET_DOUBLINGS,
    MAX_STEP_HALVINGS,
    ROOT_CERTIFICATE_FACTOR,
    ZERO_ABSCISSA_TOLERANCE,
)

from .conditions import (
    POLE_THRESHOLD,
    bracket_polynomial,
    evaluate_conditions,
    f_poles,
    sigma_implied,
    validate_density,
)
from .errors import ConvergenceError, DomainError, ParaboloidError, StencilError
from .geometry import (
    SegmentShape,
    Side,
    WaterPlane,
    archimedean_valid,
    derived_geometry,
    oblique_sector_volume,
)
from .models import (
    CaseKind,
    Equilibrium,
    EquilibriumSearch,
    NoSolutionRegion,
    RegionCase,
    SearchDiagnostics,
    SearchOptions,
    SweepPoint,
    RootCase,
    tilt_angle,
)
from .oracle import fd_jacobian
from .stability import (
    classify_archimedean,
    classify_equilibrium,
    equilibrium_hessian,
    horizontal_stability,
    potential_archimedean,
)

logger = logging.getLogger(__name__)

# Below a1 no X < 0 carries an equilibrium of the non-archimedean case
A1 = (-213 + 198 * math.sqrt(11)) / 250
# At X = 0 the equilibrium condition has a root only above this axis length
ZERO_ABSCISSA_THRESHOLD = 21 / 10
# Above this axis length every X has at least one root
REGION_UPPER = 3.0

_SIDE_ORDER = {Side.LEFT_HAND: 0, Side.RIGHT_HAND: 1, Side.HORIZONTAL: 2}


@dataclass(frozen=True)
class IsolatedRoot:
    """A zero of E together with the isolating interval it was found in"""

    b: float
    interval: tuple[float, float]
    interval_index: int


@dataclass(frozen=True)
class RootIsolation:
    X: float
    case: RootCase
    roots: tuple[IsolatedRoot, ...]

    @property
    def values(self) -> list[float]:
        return [r.b for r in self.roots]


def root_case(X: float) -> RootCase:
    if X <= POLE_THRESHOLD:
        return RootCase.POLES
    if abs(X) <= ZERO_ABSCISSA_TOLERANCE:
        return RootCase.ZERO
    if X < 0:
        return RootCase.NEGATIVE
    return RootCase.POSITIVE


def _equilibrium_function(shape: SegmentShape, X: float) -> Callable[[float], float]:
    def E(b: float) -> float:
        geom = derived_geometry(shape, WaterPlane(b=b, X=X))
        return geom.f * oblique_sector_volume(geom) + 2 * b / 9 * geom.A52

    return E


def _certificate(shape: SegmentShape, X: float, b: float) -> float:
    geom = derived_geometry(shape, WaterPlane(b=b, X=X))
    return ROOT_CERTIFICATE_FACTOR * max(1.0, oblique_sector_volume(geom), geom.A52)


def _solve_in(
    shape: SegmentShape, X: float, E: Callable[[float], float], lo: float, hi: float, index: int
) -> Optional[IsolatedRoot]:
    E_lo, E_hi = E(lo), E(hi)
    if E_lo == 0:
        return IsolatedRoot(b=lo, interval=(lo, hi), interval_index=index)
    if E_lo * E_hi > 0:
        logger.warning(f"no sign change of E on [{lo}, {hi}] at a={shape.a}, X={X}; interval skipped")
        return None
    b = brentq(E, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    residual = abs(E(b))
    if residual > _certificate(shape, X, b):
        logger.warning(f"root b={b} at a={shape.a}, X={X} fails certification |E|={residual:.3e}")
    return IsolatedRoot(b=b, interval=(lo, hi), interval_index=index)


def _expand_down(E: Callable[[float], float], start: float) -> Optional[float]:
    """Walk down from start by doubling steps until E > 0"""
    step = 1.0
    for _ in range(MAX_BRACKET_DOUBLINGS):
        candidate = start - step
        if E(candidate) > 0:
            return candidate
        step *= 2
    return None


def isolate_equilibrium_roots(shape: SegmentShape, X: float) -> RootIsolation:
    """
    All zeros b < 0 of E at fixed X, each with its isolating interval.

    Raises:
        DomainError: If X is not inside (-√a, √a)
    """
    if not -shape.sqrt_a < X < shape.sqrt_a:
        raise DomainError(f"X={X} outside (-√a, √a) = ({-shape.sqrt_a}, {shape.sqrt_a})")
    case = root_case(X)
    E = _equilibrium_function(shape, X)
    bracket = bracket_polynomial(shape, X) if case is not RootCase.ZERO else None
    negative = bracket.negative_roots if bracket else ()
    found: list[Optional[IsolatedRoot]] = []

    if case is RootCase.POLES:
        poles = f_poles(X)
        lower = negative[0] if negative else None
        if lower is None or lower >= poles.b1 or E(lower) <= 0:
            logger.debug(f"lower bracket from P unusable at X={X}; expanding below b1={poles.b1}")
            lower = _expand_down(E, poles.b1)
        if lower is None:
            logger.warning(f"no lower bracket for E below b1={poles.b1} at a={shape.a}, X={X}")
        else:
            found.append(_solve_in(shape, X, E, lower, poles.b1, 0))
        found.append(_solve_in(shape, X, E, poles.b2, 0.0, 1))

    elif case is RootCase.NEGATIVE:
        if len(negative) == 2 and not bracket.double_root:
            low, high = negative
            E_high = E(high)
            if abs(E_high) <= _certificate(shape, X, high):
                found.append(IsolatedRoot(b=high, interval=(high, high), interval_index=0))
            elif E_high < 0:
                found.append(_solve_in(shape, X, E, low, high, 0))
                found.append(_solve_in(shape, X, E, high, 0.0, 1))
        elif len(negative) not in (0, 2):
            logger.debug(f"P has {len(negative)} negative zeros at a={shape.a}, X={X}; no root")

    elif case is RootCase.ZERO:
        if shape.a > ZERO_ABSCISSA_THRESHOLD:
            # the negative zero of P at X = 0, where P is the quadratic (21 - 10a)b² + 12a + 18
            low = -math.sqrt((12 * shape.a + 18) / (10 * shape.a - 21))
            found.append(_solve_in(shape, X, E, low, 0.0, 0))

    else:
        if negative:
            found.append(_solve_in(shape, X, E, negative[0], 0.0, 0))
        else:
            logger.warning(f"P has no negative zero at a={shape.a}, X={X}")

    roots = tuple(sorted((r for r in found if r is not None), key=lambda r: r.b))
    logger.debug(f"a={shape.a}, X={X}, case {case.value}: roots {[r.b for r in roots]}")
    return RootIsolation(X=X, case=case, roots=roots)


def roots_E_for_X(shape: SegmentShape, X: float) -> list[float]:
    """Negative zeros of the equilibrium condition at fixed X, ascending"""
    return isolate_equilibrium_roots(shape, X).values


def no_solution_region(shape: SegmentShape) -> NoSolutionRegion:
    """Abscissae X < 0 without any equilibrium of the non-archimedean case"""
    a = shape.a
    gamma = -11 * a * a / 54 + 5 * a / 9 + 13 / 24
    delta = (3 - a) * (a + 6) ** 3
    X1 = X2 = None
    if delta >= 0:
        spread = math.sqrt(delta) / 27
        if gamma + spread >= 0:
            X1 = -math.sqrt(gamma + spread)
        if gamma - spread >= 0:
            X2 = -math.sqrt(gamma - spread)
    fields = dict(a=a, a1=A1, gamma=gamma, delta=delta, X1=X1, X2=X2)
    if a <= A1:
        return NoSolutionRegion(**fields, applicable_case=RegionCase.ALL_NEGATIVE, X_interval=(-shape.sqrt_a, 0.0))
    if a <= ZERO_ABSCISSA_THRESHOLD:
        return NoSolutionRegion(
            **fields, applicable_case=RegionCase.UNTIL_ZERO, X_interval=(X1, 0.0), lower_closed=True
        )
    if a <= REGION_UPPER:
        return NoSolutionRegion(
            **fields, applicable_case=RegionCase.BOUNDED, X_interval=(X1, X2), lower_closed=True, upper_closed=True
        )
    return NoSolutionRegion(**fields, applicable_case=RegionCase.EMPTY)


def _archimedean_density(sigma: float, side: Side) -> float:
    """The archimedean formulas describe right-hand positions; left-hand ones use σ* = 1 - σ"""
    return 1.0 - sigma if side is Side.LEFT_HAND else sigma


def _archimedean_position(
    shape: SegmentShape, c: float, b: float, sigma: float, sigma_eff: float, side: Side
) -> Equilibrium:
    pe = potential_archimedean(shape, c, b, sigma_eff)
    beta = math.hypot(b, 1.0)
    return Equilibrium(
        side=side,
        case_kind=CaseKind.ARCHIMEDEAN,
        X=(shape.a - c) / b if b != 0 else None,
        b=b,
        c=c,
        sigma=sigma,
        sigma_effective=sigma_eff,
        tilt_deg=tilt_angle(b, side),
        stability=classify_archimedean(shape, c, b, sigma_eff),
        residuals=(abs(pe.grad[1]) * beta**3, abs(pe.grad[0]) * beta),
    )


def archimedean_equilibria(shape: SegmentShape, sigma: float, side: Side = Side.RIGHT_HAND) -> list[Equilibrium]:
    """
    Closed-form positions whose waterplane misses the basis circle.

    The upright position b = 0 always exists; a tilted one exists when
    b² = (8a/3)(1 - √σ) - 2 is positive and the plane stays clear of the basis
    circle.
    """
    validate_density(sigma)
    if side is Side.HORIZONTAL:
        raise DomainError("archimedean positions are either left hand or right hand")
    sigma_eff = _archimedean_density(sigma, side)
    a, root = shape.a, math.sqrt(sigma_eff)
    solutions = [_archimedean_position(shape, a * root, 0.0, sigma, sigma_eff, side)]
    b_squared = 8 * a / 3 * (1 - root) - 2
    if b_squared > 0:
        b = -math.sqrt(b_squared)
        c = a * root - b_squared / 4
        if archimedean_valid(shape, b, c):
            solutions.append(_archimedean_position(shape, c, b, sigma, sigma_eff, side))
        else:
            logger.debug(f"tilted archimedean candidate b={b}, c={c} cuts the basis circle at a={a}")
    return solutions


def horizontal_equilibrium(shape: SegmentShape, sigma: float) -> Optional[Equilibrium]:
    """The position with horizontal axis, which floats only at σ = 1/2"""
    validate_density(sigma)
    if abs(sigma - 0.5) > DENSITY_HALF_TOLERANCE:
        return None
    return Equilibrium(
        side=Side.HORIZONTAL,
        case_kind=CaseKind.HORIZONTAL,
        X=0.0,
        sigma=sigma,
        sigma_effective=sigma,
        tilt_deg=90.0,
        stability=horizontal_stability(shape),
        residuals=(0.0, 0.0),
    )


def _nearest_root(shape: SegmentShape, X: float, target: float) -> float:
    """The root of E at X closest to target, measured in asinh(b)"""
    roots = roots_E_for_X(shape, X)
    if not roots:
        raise ConvergenceError(f"branch lost: no root of E at X={X}")
    return min(roots, key=lambda b: abs(math.asinh(b) - math.asinh(target)))


def _branch_follower(shape: SegmentShape, left: SweepPoint, right: SweepPoint) -> Callable[[float], float]:
    """b along the branch between two sweep points"""

    def b_of(X: float) -> float:
        t = (X - left.X) / (right.X - left.X)
        return _nearest_root(shape, X, left.b + t * (right.b - left.b))

    return b_of


def _residuals(shape: SegmentShape, X: float, b: float, sigma_eff: float) -> tuple[float, float]:
    ev = evaluate_conditions(shape, WaterPlane.non_archimedean(shape, X, b), sigma_eff)
    return ev.E, ev.F


def _newton_polish(
    shape: SegmentShape, X0: float, b0: float, sigma_eff: float, options: SearchOptions
) -> tuple[float, float]:
    """
    Damped Newton on (F/V, E/V) with a finite-difference Jacobian.

    Raises:
        ConvergenceError: If the residuals cannot be pushed below the tolerance
    """
    V = shape.volume
    target = options.residual_tolerance * 1e-4

    def residual(p: np.ndarray) -> np.ndarray:
        E, F = _residuals(shape, float(p[0]), float(p[1]), sigma_eff)
        return np.array([F / V, E / V])

    point = np.array([X0, b0], dtype=float)
    r = residual(point)
    norm = float(np.linalg.norm(r))
    for iteration in range(options.max_newton_iterations):
        if max(abs(r[0]), abs(r[1]) * V) <= target:
            break
        try:
            jacobian = fd_jacobian(residual, point, JACOBIAN_STEP).value
            delta = np.linalg.solve(jacobian, -r)
        except (StencilError, np.linalg.LinAlgError) as exc:
            raise ConvergenceError(f"Newton step failed at X={point[0]}, b={point[1]}: {exc}") from exc
        scale, improved = 1.0, False
        for _ in range(MAX_STEP_HALVINGS):
            trial = point + scale * delta
            try:
                r_trial = residual(trial)
            except DomainError:
                scale /= 2
                continue
            if np.linalg.norm(r_trial) < norm:
                improved = True
                break
            scale /= 2
        if not improved:
            logger.debug(f"damping exhausted after {iteration} Newton steps at X={point[0]}, b={point[1]}")
            break
        point, r, norm = trial, r_trial, float(np.linalg.norm(r_trial))
    _check_residuals(shape, float(point[0]), float(point[1]), sigma_eff, options)
    return float(point[0]), float(point[1])


def _check_residuals(shape: SegmentShape, X: float, b: float, sigma_eff: float, options: SearchOptions) -> None:
    E, F = _residuals(shape, X, b, sigma_eff)
    tol = options.residual_tolerance
    if abs(E) > tol or abs(F) / shape.volume > tol:
        raise ConvergenceError(f"residuals |E|={abs(E):.3e}, |F|/V={abs(F) / shape.volume:.3e} above {tol} at X={X}, b={b}")


def _inside(left: SweepPoint, right: SweepPoint, X: float, b: float) -> bool:
    lo_b, hi_b = sorted((left.b, right.b))
    slack = 0.1 * (hi_b - lo_b) + 1e-9 * max(1.0, abs(b))
    return left.X - 1e-12 <= X <= right.X + 1e-12 and lo_b - slack <= b <= hi_b + slack


def _polish_crossing(
    shape: SegmentShape,
    left: SweepPoint,
    right: SweepPoint,
    sigma_eff: float,
    options: SearchOptions,
    diagnostics: SearchDiagnostics,
) -> tuple[float, float]:
    g_left, g_right = left.sigma - sigma_eff, right.sigma - sigma_eff
    t = g_left / (g_left - g_right) if g_left != g_right else 0.5
    X0, b0 = left.X + t * (right.X - left.X), left.b + t * (right.b - left.b)
    try:
        X, b = _newton_polish(shape, X0, b0, sigma_eff, options)
        if _inside(left, right, X, b):
            return X, b
        logger.debug(f"Newton left the bracket [{left.X}, {right.X}] for ({X}, {b})")
    except ConvergenceError as exc:
        logger.debug(f"Newton polish failed near X={X0}: {exc}")
    diagnostics.fallbacks += 1
    logger.warning(f"falling back to bisection along the branch on [{left.X}, {right.X}]")
    b_of = _branch_follower(shape, left, right)

    def gap(X: float) -> float:
        return sigma_implied(shape, WaterPlane.non_archimedean(shape, X, b_of(X))) - sigma_eff

    try:
        X = brentq(gap, left.X, right.X, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    except (ValueError, ParaboloidError) as exc:
        raise ConvergenceError(f"bisection along the branch failed on [{left.X}, {right.X}]: {exc}") from exc
    b = b_of(X)
    _check_residuals(shape, X, b, sigma_eff, options)
    return X, b


def _determinant(shape: SegmentShape, X: float, b: float) -> float:
    return float(np.linalg.det(equilibrium_hessian(shape, X, b)))


def _refine_fold(shape: SegmentShape, left: SweepPoint, right: SweepPoint) -> tuple[float, float, float]:
    """Locate the zero of the Hessian determinant between two branch points"""
    b_of = _branch_follower(shape, left, right)

    def det(X: float) -> float:
        return _determinant(shape, X, b_of(X))

    try:
        X = brentq(det, left.X, right.X, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    except ValueError as exc:
        raise ConvergenceError(f"fold refinement failed on [{left.X}, {right.X}]: {exc}") from exc
    b = b_of(X)
    return X, b, sigma_implied(shape, WaterPlane.non_archimedean(shape, X, b))


def _non_archimedean_position(
    shape: SegmentShape, X: float, b: float, sigma: float, sigma_eff: float, side: Side
) -> Equilibrium:
    E, F = _residuals(shape, X, b, sigma_eff)
    return Equilibrium(
        side=side,
        case_kind=CaseKind.NON_ARCHIMEDEAN,
        X=X,
        b=b,
        c=shape.a - b * X,
        sigma=sigma,
        sigma_effective=sigma_eff,
        tilt_deg=tilt_angle(b, side),
        stability=classify_equilibrium(shape, X, b, sigma_eff),
        residuals=(abs(E), abs(F)),
    )


def non_archimedean_density(sigma: float, side: Side) -> float:
    """The non-archimedean formulas describe left-hand positions; right-hand ones use 1 - σ"""
    return 1.0 - sigma if side is Side.RIGHT_HAND else sigma


def _branch_folds(shape: SegmentShape, branch: list[SweepPoint]) -> list[tuple[float, float, float]]:
    """Folds (X, b, σ) of a branch, where the equilibrium Hessian turns singular"""
    determinants = [_determinant(shape, p.X, p.b) for p in branch]
    folds = []
    for i, (left, right) in enumerate(zip(branch, branch[1:])):
        if determinants[i] * determinants[i + 1] >= 0:
            continue
        try:
            folds.append(_refine_fold(shape, left, right))
        except ParaboloidError as exc:
            logger.warning(f"fold between X={left.X} and X={right.X} not refined: {exc}")
    return folds


def _branch_equilibria(
    shape: SegmentShape,
    branch: list[SweepPoint],
    folds: list[tuple[float, float, float]],
    sigma_eff: float,
    side: Side,
    options: SearchOptions,
    diagnostics: SearchDiagnostics,
) -> list[tuple[float, float]]:
    """
    Candidates of one branch at the effective density.

    Every fold becomes a branch point, so the two crossings next to a fold land in
    separate cells. A fold that satisfies the residual bounds itself is the merged
    position and the cells touching it are not searched again.
    """
    positions: list[tuple[float, float]] = []
    points = list(branch)
    merged: list[SweepPoint] = []
    for X, b, sigma_fold in folds:
        fold = SweepPoint(X=X, b=b, sigma=sigma_fold, branch_id=branch[0].branch_id, case=root_case(X))
        points.append(fold)
        try:
            _check_residuals(shape, X, b, sigma_eff, options)
        except ConvergenceError:
            continue
        logger.info(f"two {side.value}-hand equilibria merge at the fold X={X}, b={b}, σ={sigma_fold}")
        diagnostics.folds += 1
        merged.append(fold)
        positions.append((X, b))
    points.sort(key=lambda p: p.X)

    for left, right in zip(points, points[1:]):
        if any(fold is left or fold is right for fold in merged):
            continue
        g_left, g_right = left.sigma - sigma_eff, right.sigma - sigma_eff
        crossing = g_left * g_right < 0 or g_left == 0 or (g_right == 0 and right is points[-1])
        if not crossing:
            continue
        diagnostics.candidates += 1
        try:
            positions.append(_polish_crossing(shape, left, right, sigma_eff, options, diagnostics))
        except ParaboloidError as exc:
            message = f"{side.value}-hand candidate on [{left.X}, {right.X}]: {exc}"
            logger.warning(f"skipped {message}")
            diagnostics.failures.append(message)
    return positions


def _deduplicate(positions: list[tuple[float, float]], tolerance: float) -> list[tuple[float, float]]:
    unique: list[tuple[float, float]] = []
    for X, b in positions:
        if all(math.hypot(X - u, b - v) >= tolerance for u, v in unique):
            unique.append((X, b))
    return unique


def _sort_key(eq: Equilibrium) -> tuple:
    return (_SIDE_ORDER[eq.side], eq.X is not None, eq.X if eq.X is not None else 0.0, eq.b or 0.0)


def search_equilibria(
    shape: SegmentShape, sigma: float, options: Optional[SearchOptions] = None
) -> EquilibriumSearch:
    """
    Every equilibrium of the segment at density σ, with search diagnostics.

    Archimedean and horizontal positions come in closed form. Non-archimedean
    positions are found on the branches of E = 0: sign changes of the implied
    density against σ bracket candidates that Newton polishes, and zeros of the
    Hessian determinant along a branch locate folds where two candidates merge.
    """
    # Import here to avoid circular imports
    from .sweep import sweep_branches

    validate_density(sigma)
    options = options or SearchOptions()
    diagnostics = SearchDiagnostics()
    equilibria: list[Equilibrium] = []
    for side in (Side.LEFT_HAND, Side.RIGHT_HAND):
        equilibria.extend(archimedean_equilibria(shape, sigma, side))
    horizontal = horizontal_equilibrium(shape, sigma)
    if horizontal is not None:
        equilibria.append(horizontal)

    curve = sweep_branches(shape, options.sweep_step, options.refine_steep, classify=False, workers=options.workers)
    diagnostics.sweep_points = len(curve.points)
    branches = [curve.branch(branch_id) for branch_id in curve.branch_ids]
    folds = [_branch_folds(shape, branch) for branch in branches]
    for side in (Side.LEFT_HAND, Side.RIGHT_HAND):
        sigma_eff = non_archimedean_density(sigma, side)
        positions: list[tuple[float, float]] = []
        for branch, branch_folds in zip(branches, folds):
            positions.extend(_branch_equilibria(shape, branch, branch_folds, sigma_eff, side, options, diagnostics))
        for X, b in _deduplicate(positions, options.dedup_tolerance):
            equilibria.append(_non_archimedean_position(shape, X, b, sigma, sigma_eff, side))

    equilibria.sort(key=_sort_key)
    logger.info(
        f"a={shape.a}, σ={sigma}: {len(equilibria)} equilibria from {diagnostics.sweep_points} sweep points, "
        f"{diagnostics.candidates} candidates, {len(diagnostics.failures)} failures"
    )
    return EquilibriumSearch(equilibria=equilibria, diagnostics=diagnostics)


def find_all_equilibria(
    shape: SegmentShape, sigma: float, options: Optional[SearchOptions] = None
) -> list[Equilibrium]:
    return search_equilibria(shape, sigma, options).equilibria
