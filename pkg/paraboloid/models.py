"""
Report models for equilibria, stability verdicts, regions and sweeps
"""

import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field

from config import (
    DEDUP_TOLERANCE,
    DEFAULT_SWEEP_STEP,
    MAX_NEWTON_ITERATIONS,
    RESIDUAL_TOLERANCE,
    SWEEP_WORKERS,
)

from .geometry import Side


class CaseKind(str, Enum):
    ARCHIMEDEAN = "archimedean"
    NON_ARCHIMEDEAN = "non-archimedean"
    HORIZONTAL = "horizontal"


class StabilityKind(str, Enum):
    STABLE = "stable"
    SADDLE = "saddle"
    DEGENERATE = "degenerate"


class Resolution(str, Enum):
    UNSTABLE = "unstable"
    INCONCLUSIVE = "inconclusive"


class RootCase(str, Enum):
    """Which root-isolation rule applies to an abscissa X"""

    POLES = "a"  # X <= -√(15/8): f has two negative zeros
    NEGATIVE = "b"  # -√(15/8) < X < 0
    ZERO = "c"  # |X| <= ZERO_ABSCISSA_TOLERANCE
    POSITIVE = "d"  # X > 0


class RegionCase(str, Enum):
    """Range of a that decides the shape of the no-solution region"""

    ALL_NEGATIVE = "a<=a1"
    UNTIL_ZERO = "a1<a<=21/10"
    BOUNDED = "21/10<a<=3"
    EMPTY = "a>3"


class DegenerateDetail(BaseModel):
    """Higher-order information at a singular Hessian"""

    null_direction: tuple[float, float] = Field(..., description="Unit vector (dX, db) spanning the Hessian kernel")
    cubic_coefficient: float = Field(
        ..., description="Third derivative of U along (λ, 1) where X = Y + λb makes the Hessian diagonal"
    )
    resolved: Resolution = Field(..., description="Verdict of the higher-order test")
    quartic_coefficient: Optional[float] = Field(
        None, description="Fourth-order coefficient when the cubic term vanishes identically"
    )


class StabilityVerdict(BaseModel):
    kind: StabilityKind
    eigenvalues: tuple[float, float] = Field(..., description="Hessian eigenvalues (λ_min, λ_max)")
    degenerate_detail: Optional[DegenerateDetail] = None

    @property
    def label(self) -> str:
        if self.kind is not StabilityKind.DEGENERATE:
            return self.kind.value
        if self.degenerate_detail is None:
            return "degenerate-inconclusive"
        return f"degenerate-{self.degenerate_detail.resolved.value}"

    @property
    def is_stable(self) -> bool:
        return self.kind is StabilityKind.STABLE


class Equilibrium(BaseModel):
    """A solved floating position"""

    side: Side
    case_kind: CaseKind
    X: Optional[float] = Field(None, description="Waterline abscissa; None for the upright archimedean position")
    b: Optional[float] = Field(None, description="Waterplane slope; None for the horizontal case (b → -∞)")
    c: Optional[float] = Field(None, description="Waterplane intercept c = a - bX")
    sigma: float = Field(..., description="Relative density of the segment")
    sigma_effective: float = Field(..., description="Density entering the floating condition (1 - σ when swapped)")
    tilt_deg: float = Field(..., description="Tilt angle in degrees, in [0, 180]")
    stability: StabilityVerdict
    residuals: tuple[float, float] = Field(..., description="(|E|, |F|) at the reported position")


class NoSolutionRegion(BaseModel):
    """Abscissae X < 0 for which the equilibrium condition has no solution b < 0"""

    a: float
    a1: float
    gamma: float
    delta: float
    X1: Optional[float] = None
    X2: Optional[float] = None
    applicable_case: RegionCase
    X_interval: Optional[tuple[float, float]] = None
    lower_closed: bool = False
    upper_closed: bool = False

    def contains(self, X: float) -> bool:
        if self.X_interval is None:
            return False
        lo, hi = self.X_interval
        above = X >= lo if self.lower_closed else X > lo
        below = X <= hi if self.upper_closed else X < hi
        return above and below


class SweepPoint(BaseModel):
    X: float
    b: float
    sigma: float
    branch_id: int
    stability: Optional[StabilityVerdict] = None
    case: RootCase


class SweepCurve(BaseModel):
    a: float
    step: float
    points: list[SweepPoint] = Field(default_factory=list)
    gaps: list[tuple[float, float]] = Field(default_factory=list, description="Grid X-ranges without any root")

    @property
    def branch_ids(self) -> list[int]:
        return sorted({p.branch_id for p in self.points})

    def branch(self, branch_id: int) -> list[SweepPoint]:
        return [p for p in self.points if p.branch_id == branch_id]


class SearchOptions(BaseModel):
    """Tunables of the global equilibrium search"""

    sweep_step: float = Field(DEFAULT_SWEEP_STEP, gt=0, description="Spacing of the X grid")
    refine_steep: bool = Field(True, description="Re-sample steep branch segments at step/100")
    residual_tolerance: float = Field(RESIDUAL_TOLERANCE, gt=0, description="Bound on |E| and |F|/V")
    dedup_tolerance: float = Field(DEDUP_TOLERANCE, gt=0, description="Equilibria closer than this coincide")
    max_newton_iterations: int = Field(MAX_NEWTON_ITERATIONS, ge=1)
    workers: int = Field(SWEEP_WORKERS, ge=1, description="Threads evaluating the X grid")


class SearchDiagnostics(BaseModel):
    candidates: int = 0
    failures: list[str] = Field(default_factory=list)
    folds: int = 0
    fallbacks: int = 0
    sweep_points: int = 0

    @property
    def all_failed(self) -> bool:
        return self.candidates > 0 and len(self.failures) == self.candidates


class EquilibriumSearch(BaseModel):
    equilibria: list[Equilibrium] = Field(default_factory=list)
    diagnostics: SearchDiagnostics = Field(default_factory=SearchDiagnostics)


def tilt_angle(b: float, side: Side) -> float:
    """arccos(1/β) for right-hand positions, its supplement for left-hand ones"""
    angle = math.degrees(math.acos(1.0 / math.hypot(b, 1.0)))
    return 180.0 - angle if side is Side.LEFT_HAND else angle
