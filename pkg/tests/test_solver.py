"""
Tests for root isolation, the no-solution region and the global equilibrium search
"""

import logging
import math

import numpy as np
import pytest

from paraboloid import (
    CaseKind,
    DomainError,
    InvalidDensity,
    SegmentShape,
    Side,
    StabilityKind,
    WaterPlane,
    archimedean_equilibria,
    equilibrium_E,
    find_all_equilibria,
    horizontal_equilibrium,
    isolate_equilibrium_roots,
    no_solution_region,
    roots_E_for_X,
    search_equilibria,
)
from paraboloid.models import RegionCase, Resolution, RootCase
from paraboloid.oracle import count_sign_changes
from paraboloid.solver import A1, root_case

# (side, X, b, tilt in degrees, stability) of the five non-archimedean equilibria at σ = 0.51
# density at the fold of the left-hand branch near X = -1.027
FOLD_DENSITY = 0.5100055417764991

REFERENCE_EQUILIBRIA = [
    (Side.LEFT_HAND, -1.03304236, -1.12424322, 131.653, StabilityKind.STABLE),
    (Side.LEFT_HAND, -1.02105684, -1.13986072, 131.260, StabilityKind.SADDLE),
    (Side.LEFT_HAND, -0.12106085, -12.68795681, 94.506, StabilityKind.STABLE),
    (Side.RIGHT_HAND, -1.46372405, -0.69920557, 34.961, StabilityKind.STABLE),
    (Side.RIGHT_HAND, -0.74316119, -1.52773443, 56.793, StabilityKind.SADDLE),
]


def _non_archimedean(equilibria):
    return [e for e in equilibria if e.case_kind is CaseKind.NON_ARCHIMEDEAN]


def _match(equilibria, side, X):
    candidates = [e for e in equilibria if e.side is side and abs(e.X - X) < 1e-6]
    assert len(candidates) == 1, f"expected one {side.value}-hand equilibrium at X={X}, got {candidates}"
    return candidates[0]


class TestRootCases:
    """Test the case split on X"""

    def test_cases(self):
        """Poles below -√(15/8), then negative, zero and positive X"""
        assert root_case(-1.5) is RootCase.POLES
        assert root_case(-math.sqrt(15 / 8)) is RootCase.POLES
        assert root_case(-0.5) is RootCase.NEGATIVE
        assert root_case(0.0) is RootCase.ZERO
        assert root_case(0.5) is RootCase.POSITIVE

    def test_zero_abscissa_tolerance(self):
        """Abscissae within 1e-7 of zero use the X = 0 rule"""
        assert root_case(1e-8) is RootCase.ZERO
        assert root_case(-1e-7) is RootCase.ZERO
        assert root_case(-2e-7) is RootCase.NEGATIVE
        assert root_case(2e-7) is RootCase.POSITIVE


class TestRootIsolation:
    """Test the zeros of E at fixed X"""

    def test_two_roots_with_poles(self, ref_shape):
        """a = 3.17690918, X = -1.5 has exactly two roots"""
        roots = roots_E_for_X(ref_shape, -1.5)
        assert len(roots) == 2
        assert roots[0] < roots[1] < 0
        for b in roots:
            plane = WaterPlane.non_archimedean(ref_shape, -1.5, b)
            assert abs(equilibrium_E(ref_shape, plane)) < 1e-9

    def test_isolating_intervals(self, ref_shape):
        """Every root lies inside the interval it was isolated in"""
        isolation = isolate_equilibrium_roots(ref_shape, -1.5)
        assert isolation.case is RootCase.POLES
        for root in isolation.roots:
            lo, hi = root.interval
            assert lo <= root.b <= hi

    def test_inside_no_solution_region(self):
        """a = 2.5, X = -0.5 lies in [X1, X2] and has no root"""
        assert roots_E_for_X(SegmentShape(2.5), -0.5) == []

    def test_zero_abscissa_small_axis(self):
        """a = 2 <= 21/10 has no root at X = 0"""
        assert roots_E_for_X(SegmentShape(2.0), 0.0) == []

    def test_zero_abscissa_large_axis(self):
        """a = 2.5 > 21/10 has one root at X = 0"""
        roots = roots_E_for_X(SegmentShape(2.5), 0.0)
        assert len(roots) == 1

    def test_positive_abscissa(self):
        """X > 0 always has exactly one root"""
        for a, X in [(1.0, 0.5), (2.5, 1.0), (4.0, 0.1)]:
            assert len(roots_E_for_X(SegmentShape(a), X)) == 1

    def test_agrees_with_sign_scan(self, ref_shape):
        """Root counts agree with a brute-force sign scan"""
        for X in (-1.5, -1.0, -0.5, 0.0, 0.5, 1.25):
            count, _ = count_sign_changes(ref_shape.a, X)
            assert len(roots_E_for_X(ref_shape, X)) == count

    def test_outside_segment(self, ref_shape):
        """X outside (-√a, √a) is a domain error"""
        with pytest.raises(DomainError):
            roots_E_for_X(ref_shape, 2.0)

    @pytest.mark.parametrize("X", [-1e-15, -1e-12, 1e-12, -1e-300])
    def test_tiny_abscissa_is_zero_case(self, caplog, X):
        """|X| at the zero-abscissa tolerance reuses the X = 0 root without warnings"""
        shape = SegmentShape(3.0)
        with caplog.at_level(logging.WARNING):
            isolation = isolate_equilibrium_roots(shape, X)
        assert isolation.case is RootCase.ZERO
        assert isolation.values == pytest.approx(roots_E_for_X(shape, 0.0), rel=1e-9)
        assert not [r for r in caplog.records if r.levelno >= logging.WARNING]

    def test_numpy_abscissa(self, ref_shape):
        """A numpy scalar abscissa isolates the same roots as a Python float"""
        assert roots_E_for_X(ref_shape, np.float64(-1.5)) == pytest.approx(roots_E_for_X(ref_shape, -1.5))


class TestNoSolutionRegion:
    """Test the abscissae without a non-archimedean equilibrium"""

    def test_gap_segment(self):
        """a = 2.5 gives the bounded region [X1, X2] ≈ [-1.143, -0.0917]"""
        region = no_solution_region(SegmentShape(2.5))
        assert region.applicable_case is RegionCase.BOUNDED
        assert region.X1 == pytest.approx(-1.143, abs=1e-3)
        assert region.X2 == pytest.approx(-0.0917, abs=1e-3)
        assert region.a1 == pytest.approx(1.7748, abs=1e-4)
        assert region.contains(-0.5)
        assert not region.contains(-1.3)

    def test_region_has_no_roots(self):
        """A brute-force scan finds no root anywhere inside [X1, X2]"""
        shape = SegmentShape(2.5)
        region = no_solution_region(shape)
        for X in np.linspace(region.X1, region.X2, 22)[1:-1]:
            count, _ = count_sign_changes(shape.a, float(X))
            assert count == 0

    def test_small_axis(self):
        """a = 1.5 < a1 has no solution for any X < 0"""
        region = no_solution_region(SegmentShape(1.5))
        assert region.applicable_case is RegionCase.ALL_NEGATIVE
        assert region.X_interval == pytest.approx((-math.sqrt(1.5), 0.0))
        assert region.contains(-1.0)

    def test_collapsed_interval(self):
        """a = 3 gives δ = 0 and X1 = X2"""
        region = no_solution_region(SegmentShape(3.0))
        assert region.delta == pytest.approx(0.0, abs=1e-12)
        assert region.X1 == pytest.approx(region.X2)

    def test_large_axis(self):
        """a > 3 leaves no region"""
        region = no_solution_region(SegmentShape(4.0))
        assert region.applicable_case is RegionCase.EMPTY
        assert region.X_interval is None
        assert not region.contains(-0.5)

    def test_threshold_constant(self):
        """a1 is the zero of the discriminant condition, ≈ 1.7748"""
        assert A1 == pytest.approx(1.7748, abs=1e-4)


class TestArchimedeanEquilibria:
    """Test the closed-form positions whose waterline misses the basis circle"""

    def test_short_segment_upright_only(self):
        """a = 0.5 has no tilted archimedean position, c = a√σ"""
        solutions = archimedean_equilibria(SegmentShape(0.5), 0.3)
        assert len(solutions) == 1
        assert solutions[0].b == 0.0
        assert solutions[0].c == pytest.approx(0.5 * math.sqrt(0.3))

    def test_tilted_position(self):
        """a = 1.5, σ = 0.16: b = -√0.4, c = 0.5, stable"""
        solutions = archimedean_equilibria(SegmentShape(1.5), 0.16, Side.RIGHT_HAND)
        tilted = [s for s in solutions if s.b != 0]
        assert len(tilted) == 1
        assert tilted[0].b == pytest.approx(-math.sqrt(0.4))
        assert tilted[0].c == pytest.approx(0.5)
        assert tilted[0].stability.kind is StabilityKind.STABLE

    def test_left_hand_uses_complement(self):
        """Left-hand positions at σ solve the right-hand problem at 1 - σ"""
        left = archimedean_equilibria(SegmentShape(1.5), 0.84, Side.LEFT_HAND)
        tilted = [s for s in left if s.b != 0]
        assert tilted[0].b == pytest.approx(-math.sqrt(0.4))
        assert tilted[0].sigma_effective == pytest.approx(0.16)
        assert tilted[0].tilt_deg > 90

    def test_candidate_rejected(self):
        """a = 3, σ = 0.25: b = -√2 cuts the basis circle and is dropped"""
        solutions = archimedean_equilibria(SegmentShape(3.0), 0.25, Side.RIGHT_HAND)
        assert [s.b for s in solutions] == [0.0]

    @pytest.mark.parametrize("offset, expected", [(-1e-6, StabilityKind.STABLE), (1e-6, StabilityKind.SADDLE)])
    def test_upright_stability_flip(self, offset, expected):
        """The upright position loses stability at a = 3/(4(1 - √σ))"""
        sigma = 0.25
        threshold = 3 / (4 * (1 - math.sqrt(sigma)))
        upright = archimedean_equilibria(SegmentShape(threshold + offset), sigma, Side.RIGHT_HAND)[0]
        assert upright.b == 0.0
        assert upright.stability.kind is expected

    def test_upright_tilt(self):
        """Right-hand upright positions have tilt 0, left-hand ones 180"""
        right = archimedean_equilibria(SegmentShape(1.0), 0.4, Side.RIGHT_HAND)[0]
        left = archimedean_equilibria(SegmentShape(1.0), 0.4, Side.LEFT_HAND)[0]
        assert right.tilt_deg == pytest.approx(0.0)
        assert left.tilt_deg == pytest.approx(180.0)


class TestHorizontalEquilibrium:
    """Test the position with horizontal axis"""

    def test_requires_half_density(self):
        """σ = 1/2 ± 1e-6 has no horizontal equilibrium"""
        shape = SegmentShape(3.0)
        assert horizontal_equilibrium(shape, 0.5 + 1e-6) is None
        assert horizontal_equilibrium(shape, 0.5 - 1e-6) is None
        assert horizontal_equilibrium(shape, 0.5) is not None

    def test_stable_long_segment(self):
        """a = 3 > 35/12 is stable"""
        eq = horizontal_equilibrium(SegmentShape(3.0), 0.5)
        assert eq.case_kind is CaseKind.HORIZONTAL
        assert eq.X == 0.0
        assert eq.tilt_deg == 90.0
        assert eq.stability.kind is StabilityKind.STABLE

    def test_unstable_short_segment(self):
        """a = 2 < 35/12 is a saddle"""
        assert horizontal_equilibrium(SegmentShape(2.0), 0.5).stability.kind is StabilityKind.SADDLE

    def test_threshold_unstable(self):
        """a = 35/12 is degenerate and resolved unstable"""
        verdict = horizontal_equilibrium(SegmentShape(35 / 12), 0.5).stability
        assert verdict.kind is StabilityKind.DEGENERATE
        assert verdict.degenerate_detail.resolved is Resolution.UNSTABLE
        assert not verdict.is_stable


class TestGlobalSearch:
    """Test the search for every equilibrium at one density"""

    def test_reference_positions(self, ref_search):
        """The five non-archimedean equilibria of the reference segment"""
        found = _non_archimedean(ref_search.equilibria)
        assert len(found) == 5
        for side, X, b, tilt, _ in REFERENCE_EQUILIBRIA:
            eq = _match(found, side, X)
            assert eq.b == pytest.approx(b, abs=1e-6)
            assert eq.tilt_deg == pytest.approx(tilt, abs=2e-3)

    def test_reference_residuals(self, ref_shape, ref_search):
        """|E| and |F|/V stay below 1e-8"""
        for eq in _non_archimedean(ref_search.equilibria):
            assert eq.residuals[0] <= 1e-8
            assert eq.residuals[1] / ref_shape.volume <= 1e-8

    def test_reference_stability(self, ref_search):
        """stable, saddle, stable, stable, saddle"""
        found = _non_archimedean(ref_search.equilibria)
        for side, X, _, _, kind in REFERENCE_EQUILIBRIA:
            assert _match(found, side, X).stability.kind is kind

    def test_reference_eigenvalues(self, ref_search):
        """Hessian eigenvalues of the three left-hand equilibria"""
        found = _non_archimedean(ref_search.equilibria)
        expected = [
            (-1.03304236, (0.00101514, 6.83907084)),
            (-1.02105684, (-0.00098808, 6.78938522)),
            (-0.12106085, (0.00001567, 7.50021176)),
        ]
        for X, eigenvalues in expected:
            eq = _match(found, Side.LEFT_HAND, X)
            assert eq.stability.eigenvalues == pytest.approx(eigenvalues, abs=1e-6)

    def test_reference_closed_form_positions(self, ref_search):
        """Both upright positions are always reported"""
        upright = [e for e in ref_search.equilibria if e.case_kind is CaseKind.ARCHIMEDEAN and e.b == 0]
        assert {e.side for e in upright} == {Side.LEFT_HAND, Side.RIGHT_HAND}
        assert not [e for e in ref_search.equilibria if e.case_kind is CaseKind.HORIZONTAL]

    def test_reference_ordering(self, ref_search):
        """Left-hand positions come first, each side by increasing X"""
        found = _non_archimedean(ref_search.equilibria)
        assert [e.side for e in found] == [Side.LEFT_HAND] * 3 + [Side.RIGHT_HAND] * 2
        left = [e.X for e in found if e.side is Side.LEFT_HAND]
        assert left == sorted(left)

    def test_reference_diagnostics(self, ref_search):
        """Every candidate converged"""
        diagnostics = ref_search.diagnostics
        assert diagnostics.candidates >= 5
        assert diagnostics.failures == []
        assert not diagnostics.all_failed
        assert diagnostics.sweep_points > 0

    @pytest.mark.slow
    def test_merged_fold(self, ref_shape):
        """At σ = 0.51000554 the two nearby left-hand solutions merge into one degenerate position"""
        equilibria = find_all_equilibria(ref_shape, 0.51000554)
        near = [
            e
            for e in _non_archimedean(equilibria)
            if e.side is Side.LEFT_HAND and -1.06 < e.X < -1.0
        ]
        assert len(near) == 1
        merged = near[0]
        assert merged.X == pytest.approx(-1.02702703, abs=1e-6)
        assert merged.b == pytest.approx(-1.13205421, abs=1e-6)
        assert merged.tilt_deg == pytest.approx(131.456, abs=2e-3)
        assert merged.stability.kind is StabilityKind.DEGENERATE
        detail = merged.stability.degenerate_detail
        assert detail.cubic_coefficient == pytest.approx(0.20378903, abs=1e-4)
        assert detail.resolved is Resolution.UNSTABLE

    @pytest.mark.slow
    @pytest.mark.parametrize("offset, count", [(-9e-8, 2), (9e-8, 0)])
    def test_near_fold(self, ref_shape, offset, count):
        """Just off the fold density the fold point itself is never reported; only real crossings are"""
        sigma = FOLD_DENSITY + offset
        search = search_equilibria(ref_shape, sigma)
        near = [
            e
            for e in _non_archimedean(search.equilibria)
            if e.side is Side.LEFT_HAND and -1.06 < e.X < -1.0
        ]
        assert len(near) == count
        for e in near:
            assert max(e.residuals) <= 1e-8
            assert e.stability.kind is not StabilityKind.DEGENERATE
        assert search.diagnostics.folds == 0

    @pytest.mark.slow
    def test_short_segment(self):
        """a = 0.5, σ = 0.3 has a steep left-hand saddle next to the upright position"""
        equilibria = find_all_equilibria(SegmentShape(0.5), 0.3)
        assert any(e.case_kind is CaseKind.ARCHIMEDEAN and e.b == 0 for e in equilibria)
        saddle = _match(_non_archimedean(equilibria), Side.LEFT_HAND, 0.1589112224)
        assert saddle.b == pytest.approx(-14.7075546494, abs=1e-6)
        assert saddle.stability.kind is StabilityKind.SADDLE
        assert max(saddle.residuals) <= 1e-8

    @pytest.mark.slow
    def test_horizontal_included(self):
        """a = 2.5, σ = 1/2 includes the unstable horizontal position"""
        equilibria = search_equilibria(SegmentShape(2.5), 0.5).equilibria
        horizontal = [e for e in equilibria if e.case_kind is CaseKind.HORIZONTAL]
        assert len(horizontal) == 1
        assert horizontal[0].sigma == 0.5
        assert not horizontal[0].stability.is_stable

    def test_invalid_density(self, ref_shape):
        """σ outside (0, 1) is rejected before any sweep"""
        with pytest.raises(InvalidDensity):
            search_equilibria(ref_shape, 1.5)
