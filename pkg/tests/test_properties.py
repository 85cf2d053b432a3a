"""
Property-based tests over random shapes and waterplanes
"""

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from paraboloid import (
    SegmentShape,
    Side,
    StabilityKind,
    WaterPlane,
    archimedean_equilibria,
    derived_geometry,
    e_tilde_and_derivative,
    equilibrium_E,
    isolate_equilibrium_roots,
    oblique_sector_moments,
    oblique_sector_volume,
    potential_archimedean,
    potential_nonarchimedean,
    right_sector_moments,
    right_sector_volume,
)
from paraboloid.conditions import f_value
from paraboloid.oracle import (
    count_sign_changes,
    fd_gradient,
    fd_hessian,
    quad_oblique_sector,
    quad_sector_moments,
    quad_sector_volume,
)

axis_lengths = st.floats(min_value=0.5, max_value=5.0)
relative_abscissae = st.floats(min_value=-0.95, max_value=0.95)
slopes = st.floats(min_value=-20.0, max_value=-0.01)

SCAN_WINDOW = (-1e4, -1e-6)


def _extrapolated_hessian(fn, point, step=1e-3):
    coarse = fd_hessian(fn, point, step).value
    fine = fd_hessian(fn, point, step / 2).value
    return (4 * fine - coarse) / 3


def _derivative(fn, x, h):
    return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)


@pytest.mark.slow
class TestRootCounts:
    """Root isolation agrees with a brute-force sign scan"""

    @settings(max_examples=200, deadline=None)
    @given(a=axis_lengths, t=relative_abscissae)
    def test_count_matches_scan(self, a, t):
        """Roots inside the scan window match its sign changes one for one"""
        X = t * math.sqrt(a)
        isolation = isolate_equilibrium_roots(SegmentShape(a), X)
        count, midpoints = count_sign_changes(a, X, *SCAN_WINDOW)
        inside = [b for b in isolation.values if SCAN_WINDOW[0] < b < SCAN_WINDOW[1]]
        assert len(inside) == count
        for b in inside:
            assert min(abs(m - b) for m in midpoints) <= 1e-3 * abs(b)

    @settings(max_examples=200, deadline=None)
    @given(a=axis_lengths, t=relative_abscissae)
    def test_roots_inside_intervals(self, a, t):
        """Every root lies in the interval that isolated it, and the intervals are disjoint"""
        X = t * math.sqrt(a)
        isolation = isolate_equilibrium_roots(SegmentShape(a), X)
        for root in isolation.roots:
            lo, hi = root.interval
            assert lo <= root.b <= hi <= 0
        intervals = sorted(root.interval for root in isolation.roots)
        for (_, first_hi), (second_lo, _) in zip(intervals, intervals[1:]):
            assert first_hi <= second_lo


@pytest.mark.slow
class TestClosedFormVolumes:
    """Closed-form sector volumes and moments agree with quadrature"""

    @settings(max_examples=50, deadline=None)
    @given(a=axis_lengths, t=relative_abscissae, b=slopes)
    def test_volumes(self, a, t, b):
        """V(a, X) and V(a', X') match the quadrature of the cross-sections"""
        X = t * math.sqrt(a)
        shape = SegmentShape(a)
        geom = derived_geometry(shape, WaterPlane(b=b, X=X))
        scale = shape.volume
        assert right_sector_volume(a, X) == pytest.approx(quad_sector_volume(a, X).value, rel=1e-8, abs=1e-12 * scale)
        oblique, _, _ = quad_oblique_sector(a, X, b)
        assert oblique_sector_volume(geom) == pytest.approx(oblique.value, rel=1e-8, abs=1e-12 * scale)

    @settings(max_examples=50, deadline=None)
    @given(a=axis_lengths, t=relative_abscissae, b=slopes)
    def test_moments(self, a, t, b):
        """x·V and z·V of both sectors match the quadrature of the cross-sections"""
        X = t * math.sqrt(a)
        shape = SegmentShape(a)
        geom = derived_geometry(shape, WaterPlane(b=b, X=X))
        scale = shape.volume * max(1.0, a)
        right = right_sector_moments(a, X)
        moment_x, moment_z = quad_sector_moments(a, X)
        assert right.moment_x == pytest.approx(moment_x.value, rel=1e-8, abs=1e-11 * scale)
        assert right.moment_z == pytest.approx(moment_z.value, rel=1e-8, abs=1e-11 * scale)
        oblique = oblique_sector_moments(geom)
        _, oblique_x, oblique_z = quad_oblique_sector(a, X, b)
        assert oblique.moment_x == pytest.approx(oblique_x.value, rel=1e-8, abs=1e-11 * scale)
        assert oblique.moment_z == pytest.approx(oblique_z.value, rel=1e-8, abs=1e-11 * scale)


@pytest.mark.slow
class TestDerivativeFidelity:
    """Analytic derivatives of U and Ẽ match finite differences"""

    @settings(max_examples=100, deadline=None)
    @given(
        a=st.floats(min_value=1.0, max_value=4.0),
        t=st.floats(min_value=-0.9, max_value=0.9),
        b=st.floats(min_value=-5.0, max_value=-0.2),
        sigma=st.floats(min_value=0.1, max_value=0.9),
    )
    def test_gradient(self, a, t, b, sigma):
        """∇U(X, b) agrees with a centred difference"""
        shape = SegmentShape(a)
        X = t * math.sqrt(a)

        def U(x, y):
            return potential_nonarchimedean(shape, x, y, sigma).U

        analytic = potential_nonarchimedean(shape, X, b, sigma).grad
        numeric = fd_gradient(U, (X, b)).value
        assert analytic == pytest.approx(tuple(numeric), rel=1e-5, abs=1e-6)

    @settings(max_examples=100, deadline=None)
    @given(
        a=st.floats(min_value=1.0, max_value=4.0),
        t=st.floats(min_value=-0.9, max_value=0.9),
        b=st.floats(min_value=-5.0, max_value=-0.2),
        sigma=st.floats(min_value=0.1, max_value=0.9),
    )
    def test_hessian(self, a, t, b, sigma):
        """The Hessian of U(X, b), F and E terms included, agrees with extrapolated differences"""
        shape = SegmentShape(a)
        X = t * math.sqrt(a)

        def U(x, y):
            return potential_nonarchimedean(shape, x, y, sigma).U

        analytic = potential_nonarchimedean(shape, X, b, sigma).hessian
        numeric = _extrapolated_hessian(U, (X, b))
        np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-6 * max(1.0, np.abs(analytic).max()))

    @settings(max_examples=100, deadline=None)
    @given(
        a=st.floats(min_value=1.0, max_value=4.0),
        b=st.floats(min_value=-1.0, max_value=-0.05),
        depth=st.floats(min_value=0.2, max_value=0.8),
        sigma=st.floats(min_value=0.1, max_value=0.9),
    )
    def test_archimedean_derivatives(self, a, b, depth, sigma):
        """Gradient and Hessian of U(c, b) for planes missing the basis circle agree with differences"""
        shape = SegmentShape(a)
        # c between the empty plane c = -b²/4 and the plane through the rim, c = a + b√a
        c = -b * b / 4 + depth * (math.sqrt(a) + b / 2) ** 2

        def U(x, y):
            return potential_archimedean(shape, x, y, sigma).U

        potential = potential_archimedean(shape, c, b, sigma)
        assert potential.grad == pytest.approx(tuple(fd_gradient(U, (c, b)).value), rel=1e-5, abs=1e-6)
        numeric = _extrapolated_hessian(U, (c, b))
        scale = max(1.0, np.abs(potential.hessian).max())
        np.testing.assert_allclose(potential.hessian, numeric, rtol=1e-5, atol=1e-6 * scale)

    @settings(max_examples=100, deadline=None)
    @given(a=axis_lengths, t=relative_abscissae, b=slopes)
    def test_normalized_derivative(self, a, t, b):
        """∂Ẽ/∂b in rational form agrees with a five-point difference away from the poles of Ẽ"""
        shape = SegmentShape(a)
        X = t * math.sqrt(a)
        h = 1e-5 * max(1.0, abs(b))
        assume(all(abs(f_value(X, b + k * h)) > 0.01 for k in (-2, 0, 2)))

        def E_tilde(y):
            return e_tilde_and_derivative(shape, X, y)[0]

        value, derivative = e_tilde_and_derivative(shape, X, b)
        numeric = _derivative(E_tilde, b, h)
        assert derivative == pytest.approx(numeric, rel=1e-6, abs=1e-9 * max(1.0, abs(value)) / h)


@pytest.mark.slow
class TestSteepLimit:
    """E tends to -4X·A^(5/2)/45 as the waterplane turns vertical"""

    @settings(max_examples=50, deadline=None)
    @given(a=axis_lengths, t=relative_abscissae)
    def test_limit(self, a, t):
        """E at b = -10⁶ is within 1e-3·A^(5/2) of its limit"""
        X = t * math.sqrt(a)
        A52 = (a - X * X) ** 2.5
        E = equilibrium_E(SegmentShape(a), WaterPlane(b=-1e6, X=X))
        assert abs(E - (-4 * X / 45) * A52) <= 1e-3 * A52


@pytest.mark.slow
class TestOracleConsistency:
    """The two quadrature rules and the finite-difference stencils behave as advertised"""

    @settings(max_examples=50, deadline=None)
    @given(a=axis_lengths, t=st.floats(min_value=-1.0, max_value=1.0))
    def test_rules_agree(self, a, t):
        """Adaptive Gauss-Legendre and QUADPACK agree within their combined error estimates"""
        X = t * math.sqrt(a)
        ours = quad_sector_volume(a, X)
        quadpack = quad_sector_volume(a, X, rule="quadpack")
        allowed = ours.error_estimate + quadpack.error_estimate + 1e-12 * max(1.0, abs(quadpack.value))
        assert abs(ours.value - quadpack.value) <= allowed

    @settings(max_examples=25, deadline=None)
    @given(x=st.floats(min_value=-1.0, max_value=1.0), y=st.floats(min_value=-1.0, max_value=1.0))
    def test_gradient_convergence_order(self, x, y):
        """Halving the step cuts the centred-difference error by about four"""

        def fn(u, v):
            return math.exp(u + 2 * v)

        exact = np.array([1.0, 2.0]) * fn(x, y)
        coarse = np.abs(fd_gradient(fn, (x, y), step=1e-2).value - exact)
        fine = np.abs(fd_gradient(fn, (x, y), step=5e-3).value - exact)
        assert np.all((coarse / fine >= 3) & (coarse / fine <= 5))


class TestTiltedArchimedean:
    """Tilted archimedean positions are stable"""

    @settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
    @given(a=st.floats(min_value=0.5, max_value=6.0), sigma=st.floats(min_value=0.01, max_value=0.99))
    def test_tilted_positions_stable(self, a, sigma):
        """Every tilted closed-form position clear of the bifurcation is stable"""
        tilted = [s for s in archimedean_equilibria(SegmentShape(a), sigma, Side.RIGHT_HAND) if s.b != 0]
        # Close to b = 0 the tilted position branches off the upright one and the Hessian is nearly singular
        assume(tilted and abs(tilted[0].b) > 0.05)
        assert tilted[0].stability.kind is StabilityKind.STABLE
