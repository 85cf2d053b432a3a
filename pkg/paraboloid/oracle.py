"""
Independent numerical ground truth

Adaptive Gauss-Legendre quadrature of the sector integrands (cross-checked by
QUADPACK through scipy), finite-difference stencils for gradients, Hessians,
Jacobians and third directional derivatives, and a vectorized brute-force scan
of the sign of E along a logarithmic b grid, whose sector volumes come from a
fixed high-order rule over the same cross-sections.

None of these functions use the closed-form sector volumes; they integrate the
parabolic cross-sections directly.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.polynomial.legendre import Legendre, leggauss
from scipy import integrate

from config import QUADRATURE_MAX_EVALUATIONS, QUADRATURE_ORDER, QUADRATURE_TOLERANCE, SCAN_QUADRATURE_ORDER

from .errors import DomainError, StencilError, ToleranceError

logger = logging.getLogger(__name__)


def _lobatto(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Lobatto nodes and weights on [-1, 1]; both endpoints are nodes"""
    edge = Legendre.basis(n - 1)
    nodes = np.concatenate(([-1.0], np.sort(edge.deriv().roots().real), [1.0]))
    return nodes, 2.0 / (n * (n - 1) * edge(nodes) ** 2)


# The coarse rule samples the panel ends, so a jump between an end and the first
# Gauss node still shows up as a disagreement between the two rules
_NODES, _WEIGHTS = _lobatto(QUADRATURE_ORDER + 1)
_FINE_NODES, _FINE_WEIGHTS = leggauss(2 * QUADRATURE_ORDER)
_SCAN_NODES, _SCAN_WEIGHTS = leggauss(SCAN_QUADRATURE_ORDER)
# rows of the scan evaluated at once
_SCAN_CHUNK = 8192

RULES = ("gauss-legendre", "quadpack")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class StencilResult:
    """A finite-difference estimate and the change observed when halving the step"""

    value: Union[float, np.ndarray]
    error_estimate: float


def _panel(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float) -> tuple[float, float, float]:
    half, mid = (hi - lo) / 2, (hi + lo) / 2
    coarse = half * float(np.dot(_WEIGHTS, fn(mid + half * _NODES)))
    fine_values = fn(mid + half * _FINE_NODES)
    fine = half * float(np.dot(_FINE_WEIGHTS, fine_values))
    magnitude = half * float(np.dot(_FINE_WEIGHTS, np.abs(fine_values)))
    return coarse, fine, magnitude


def adaptive_quadrature(
    fn: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    tol: float = QUADRATURE_TOLERANCE,
    max_evaluations: int = QUADRATURE_MAX_EVALUATIONS,
) -> QuadratureResult:
    """
    Integrate a vectorized fn over [lo, hi] by adaptive bisection.

    Each panel is integrated with an (n+1)-point Gauss-Lobatto rule and a 2n-point
    Gauss-Legendre rule; their difference is the panel error. A panel is accepted
    when its error is below its share of the tolerance, proportional to its width.
    The whole interval is always split once, and a panel too narrow to split
    again is accepted as it stands.

    Raises:
        ToleranceError: If the evaluation budget is exhausted
    """
    if hi <= lo:
        return QuadratureResult(value=0.0, error_estimate=0.0, evaluations=0)
    per_panel = _NODES.size + _FINE_NODES.size
    _, rough, _ = _panel(fn, lo, hi)
    target = tol * max(1.0, abs(rough))
    width = hi - lo
    evaluations = per_panel
    value = error = 0.0
    middle = (lo + hi) / 2
    stack = [(lo, middle), (middle, hi)] if lo < middle < hi else [(lo, hi)]
    while stack:
        a, b = stack.pop()
        coarse, fine, magnitude = _panel(fn, a, b)
        evaluations += per_panel
        panel_error = abs(fine - coarse)
        allowed = max(target * (b - a) / width, 50 * np.finfo(float).eps * magnitude)
        mid = (a + b) / 2
        if panel_error <= allowed or not a < mid < b:
            value += fine
            error += panel_error
            continue
        if evaluations > max_evaluations:
            raise ToleranceError(f"quadrature budget of {max_evaluations} evaluations exhausted on [{lo}, {hi}]")
        stack.extend([(a, mid), (mid, b)])
    return QuadratureResult(value=value, error_estimate=error, evaluations=evaluations)


def _quadpack(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float) -> QuadratureResult:
    if hi <= lo:
        return QuadratureResult(value=0.0, error_estimate=0.0, evaluations=0)
    calls = 0

    def scalar(x: float) -> float:
        nonlocal calls
        calls += 1
        return float(fn(np.asarray(x)))

    value, error = integrate.quad(scalar, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=500)
    return QuadratureResult(value=value, error_estimate=abs(error), evaluations=calls)


def _integrate(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, rule: str) -> QuadratureResult:
    if rule == "gauss-legendre":
        return adaptive_quadrature(fn, lo, hi)
    if rule == "quadpack":
        return _quadpack(fn, lo, hi)
    raise ValueError(f"unknown quadrature rule '{rule}', expected one of {RULES}")


def _sector_limits(a: float, X: float) -> float:
    if a <= 0:
        raise DomainError(f"axis length must be positive, got a={a}")
    root_a = math.sqrt(a)
    if not -root_a * (1 + 1e-14) <= X <= root_a * (1 + 1e-14):
        raise DomainError(f"X={X} outside [-√a, √a] for a={a}")
    return root_a


def quad_sector_volume(a: float, X: float, rule: str = "gauss-legendre") -> QuadratureResult:
    """4/3 ∫_X^√a (a - x²)^(3/2) dx"""
    root_a = _sector_limits(a, X)
    return _integrate(lambda x: 4.0 / 3.0 * np.clip(a - x * x, 0.0, None) ** 1.5, X, root_a, rule)


def quad_sector_moments(a: float, X: float, rule: str = "gauss-legendre") -> tuple[QuadratureResult, QuadratureResult]:
    """First moments x·V and z·V of the right sector by quadrature"""
    root_a = _sector_limits(a, X)

    def moment_x(x):
        return 4.0 / 3.0 * x * np.clip(a - x * x, 0.0, None) ** 1.5

    def moment_z(x):
        return 4.0 / 3.0 * (3 * a + 2 * x * x) / 5 * np.clip(a - x * x, 0.0, None) ** 1.5

    return _integrate(moment_x, X, root_a, rule), _integrate(moment_z, X, root_a, rule)


def quad_oblique_sector(
    a: float, X: float, b: float, rule: str = "gauss-legendre"
) -> tuple[QuadratureResult, QuadratureResult, QuadratureResult]:
    """
    Volume and first moments of P ∩ {x >= X, z <= bx + c}, c = a - bX.

    The section at abscissa x is the parabolic segment x² + y² <= z <= bx + c of
    depth d = bx + c - x², with area (4/3)d^(3/2) and centroid height x² + 3d/5.
    """
    _sector_limits(a, X)
    if b > 0:
        raise DomainError(f"waterplane slope must satisfy b <= 0, got b={b}")
    c = a - b * X
    upper = b / 2 + math.sqrt(b * b / 4 + c)

    def depth(x):
        return np.clip(b * x + c - x * x, 0.0, None)

    def volume(x):
        return 4.0 / 3.0 * depth(x) ** 1.5

    def moment_x(x):
        return x * volume(x)

    def moment_z(x):
        d = depth(x)
        return (x * x + 3 * d / 5) * 4.0 / 3.0 * d**1.5

    return (
        _integrate(volume, X, upper, rule),
        _integrate(moment_x, X, upper, rule),
        _integrate(moment_z, X, upper, rule),
    )


def _evaluate(fn: Callable[..., float], *args: float) -> float:
    try:
        return float(fn(*args))
    except DomainError as exc:
        raise StencilError(f"stencil point {args} left the domain: {exc}") from exc


def _central_gradient(fn: Callable[[float, float], float], x: np.ndarray, h: float) -> np.ndarray:
    grad = np.empty(2)
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        grad[i] = (_evaluate(fn, *(x + e)) - _evaluate(fn, *(x - e))) / (2 * h)
    return grad


def fd_gradient(fn: Callable[[float, float], float], point, step: float = 1e-6) -> StencilResult:
    """Second-order centred gradient of a scalar field fn(x, y)"""
    if step <= 0:
        raise ValueError("finite-difference step must be positive")
    x = np.asarray(point, dtype=float)
    value = _central_gradient(fn, x, step)
    half = _central_gradient(fn, x, step / 2)
    return StencilResult(value=value, error_estimate=float(np.linalg.norm(value - half)))


def _central_hessian(fn: Callable[[float, float], float], x: np.ndarray, h: float) -> np.ndarray:
    centre = _evaluate(fn, *x)
    hess = np.empty((2, 2))
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        hess[i, i] = (_evaluate(fn, *(x + e)) - 2 * centre + _evaluate(fn, *(x - e))) / (h * h)
    ex, ey = np.array([h, 0.0]), np.array([0.0, h])
    cross = (
        _evaluate(fn, *(x + ex + ey))
        - _evaluate(fn, *(x + ex - ey))
        - _evaluate(fn, *(x - ex + ey))
        + _evaluate(fn, *(x - ex - ey))
    ) / (4 * h * h)
    hess[0, 1] = hess[1, 0] = cross
    return hess


def fd_hessian(fn: Callable[[float, float], float], point, step: float = 1e-3) -> StencilResult:
    """Second-order centred Hessian of fn(x, y); symmetric by construction"""
    if step <= 0:
        raise ValueError("finite-difference step must be positive")
    x = np.asarray(point, dtype=float)
    value = _central_hessian(fn, x, step)
    half = _central_hessian(fn, x, step / 2)
    return StencilResult(value=value, error_estimate=float(np.max(np.abs(value - half))))


def fd_jacobian(fn: Callable[[np.ndarray], np.ndarray], point, step: float = 1e-7) -> StencilResult:
    """
    Centred Jacobian of a vector function of a vector.

    The step is relative: component i moves by step * max(1, |x_i|).
    """
    x = np.asarray(point, dtype=float)

    def jacobian(scale: float) -> np.ndarray:
        columns = []
        for i in range(x.size):
            h = scale * max(1.0, abs(x[i]))
            e = np.zeros_like(x)
            e[i] = h
            try:
                forward, backward = np.asarray(fn(x + e)), np.asarray(fn(x - e))
            except DomainError as exc:
                raise StencilError(f"Jacobian stencil around {x} left the domain: {exc}") from exc
            columns.append((forward - backward) / (2 * h))
        return np.column_stack(columns)

    value = jacobian(step)
    half = jacobian(step / 2)
    return StencilResult(value=value, error_estimate=float(np.max(np.abs(value - half))))


def _antisymmetric_third(fn: Callable[[float, float], float], x: np.ndarray, d: np.ndarray, h: float) -> float:
    return (
        _evaluate(fn, *(x + 2 * h * d))
        - 2 * _evaluate(fn, *(x + h * d))
        + 2 * _evaluate(fn, *(x - h * d))
        - _evaluate(fn, *(x - 2 * h * d))
    ) / (2 * h**3)


def fd_directional_third(fn: Callable[[float, float], float], point, direction, step: float = 1e-3) -> StencilResult:
    """
    Third derivative of fn along direction (not normalized) by the 5-point
    antisymmetric stencil, Richardson-extrapolated over one step halving.
    """
    if step <= 0:
        raise ValueError("finite-difference step must be positive")
    x = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)
    coarse = _antisymmetric_third(fn, x, d, step)
    fine = _antisymmetric_third(fn, x, d, step / 2)
    return StencilResult(value=(4 * fine - coarse) / 3, error_estimate=abs(fine - coarse))


def batch_sector_volume(A: float, X: np.ndarray) -> np.ndarray:
    """
    V(a', X') for many sectors with a' = A + X'², by a fixed Gauss-Legendre rule.

    With r = √a', L = r - X' and s = r + X' (so L·s = A), the substitution
    x = r - L·cos²φ turns 4/3 ∫_X'^r (a' - x²)^(3/2) dx into

        8/3 · L^(5/2) ∫_0^(π/2) cos⁴φ · sinφ · (s + L·sin²φ)^(3/2) dφ,

    whose integrand is smooth at both ends. L and s are formed without
    cancellation, so tiny sectors far out on the b axis keep their relative
    accuracy.
    """
    X = np.asarray(X, dtype=float)
    r = np.sqrt(A + X * X)
    upper = X > 0
    L = np.where(upper, A / (r + np.abs(X)), r - X)
    s = np.where(upper, r + X, A / (r - X))
    phi = np.pi / 4 * (_SCAN_NODES + 1)
    sin, cos = np.sin(phi), np.cos(phi)
    volumes = np.empty_like(X)
    for start in range(0, X.size, _SCAN_CHUNK):
        chunk = slice(start, start + _SCAN_CHUNK)
        inner = (s.ravel()[chunk, None] + L.ravel()[chunk, None] * sin**2) ** 1.5
        integral = np.pi / 4 * (inner * (cos**4 * sin * _SCAN_WEIGHTS)).sum(axis=1)
        volumes.ravel()[chunk] = 8.0 / 3.0 * L.ravel()[chunk] ** 2.5 * integral
    return volumes


def scan_equilibrium_function(a: float, X: float, b: np.ndarray) -> np.ndarray:
    """E(b) at fixed (a, X) for an array of slopes b < 0, with V₂ integrated over the cross-sections"""
    b = np.asarray(b, dtype=float)
    A = a - X * X
    if A <= 0:
        raise DomainError(f"X={X} outside (-√a, √a) for a={a}")
    V2 = batch_sector_volume(A, X - b / 2)
    f = 5 * b * b / 12 - 2 * b * X / 3 + 0.5
    return f * V2 + 2 * b / 9 * A**2.5


def count_sign_changes(
    a: float, X: float, b_min: float = -1e4, b_max: float = -1e-6, num: int = 100_000
) -> tuple[int, np.ndarray]:
    """
    Brute-force count of the sign changes of E over [b_min, b_max] on a log grid.

    Returns the count and the midpoints of the grid cells where E changes sign.
    """
    if not b_min < b_max < 0:
        raise ValueError("scan window must satisfy b_min < b_max < 0")
    b = -np.geomspace(-b_min, -b_max, num)
    E = scan_equilibrium_function(a, X, b)
    signs = np.sign(E)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    return int(flips.size), (b[flips] + b[flips + 1]) / 2
