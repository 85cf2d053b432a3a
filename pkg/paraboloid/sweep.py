"""
Branch sweeping and curve export

The zeros of E over a grid of abscissae X are linked into branches; every point
carries the density it floats at, which gives the (X, σ) branch diagrams.
"""

import csv
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from config import (
    CSV_SIGNIFICANT_DIGITS,
    DEFAULT_SWEEP_STEP,
    STEEP_MEDIAN_FACTOR,
    STEEP_REFINEMENT_FACTOR,
    SWEEP_WORKERS,
)

from .conditions import sigma_implied
from .errors import DomainError, ParaboloidError
from .geometry import SegmentShape, WaterPlane
from .models import SweepCurve, SweepPoint
from .solver import IsolatedRoot, RootIsolation, isolate_equilibrium_roots, root_case
from .stability import classify_equilibrium

logger = logging.getLogger(__name__)

CSV_HEADER = ("X", "b", "sigma", "branch", "stability", "case")
EXPORT_FORMATS = ("csv", "json")


def sweep_grid(shape: SegmentShape, step: float) -> np.ndarray:
    """
    Multiples of step strictly inside (-√a, √a).

    The grid is aligned with 0, so for a = 3.17690918 and step 0.01 it runs from
    -1.78 to 1.78.
    """
    if not 0 < step < shape.sqrt_a:
        raise DomainError(f"sweep step must lie in (0, √a) = (0, {shape.sqrt_a}), got {step}")
    k_max = math.floor(shape.sqrt_a / step)
    if k_max * step >= shape.sqrt_a:
        k_max -= 1
    return np.round(np.arange(-k_max, k_max + 1) * step, 12)


def _isolate(shape: SegmentShape, X: float) -> RootIsolation:
    try:
        return isolate_equilibrium_roots(shape, X)
    except ParaboloidError as exc:
        logger.warning(f"root isolation failed at a={shape.a}, X={X}: {exc}")
        return RootIsolation(X=X, case=root_case(X), roots=())


def _isolate_all(shape: SegmentShape, grid, workers: int) -> list[RootIsolation]:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda X: _isolate(shape, float(X)), grid))
    return [_isolate(shape, float(X)) for X in grid]


def _slot(root: IsolatedRoot) -> str:
    """
    Which of the at most two roots of an abscissa this is.

    The root whose isolating interval reaches b = 0 is the upper one in every
    case; the root below the pole b1, below the larger zero of P, or at a double
    zero of P is the lower one.
    """
    return "upper" if root.interval[1] == 0.0 else "lower"


def _match(previous: list[IsolatedRoot], current: list[IsolatedRoot]) -> list[Optional[int]]:
    """
    For each current root, the index of the previous root it continues, or None.

    Roots continue only within the same slot, so two nearly coincident roots
    on either side of a fold never trade branches.
    """
    slots = {_slot(root): i for i, root in enumerate(previous)}
    return [slots.get(_slot(root)) for root in current]


def _assemble(
    isolations: list[RootIsolation],
) -> tuple[list[tuple[float, float, int, str]], list[tuple[float, float]]]:
    """Link roots across consecutive grid abscissae into (X, b, branch_id, slot) entries"""
    triples: list[tuple[float, float, int, str]] = []
    gaps: list[tuple[float, float]] = []
    previous: list[IsolatedRoot] = []
    previous_ids: list[int] = []
    next_id = 0
    gap_start: Optional[float] = None
    last_empty: Optional[float] = None

    for isolation in isolations:
        current = list(isolation.roots)
        if not current:
            gap_start = isolation.X if gap_start is None else gap_start
            last_empty = isolation.X
            previous, previous_ids = [], []
            continue
        if gap_start is not None:
            gaps.append((gap_start, last_empty))
            gap_start = None
        ids = []
        for match in _match(previous, current):
            if match is None:
                ids.append(next_id)
                next_id += 1
            else:
                ids.append(previous_ids[match])
        triples.extend((isolation.X, root.b, branch_id, _slot(root)) for root, branch_id in zip(current, ids))
        previous, previous_ids = current, ids
    if gap_start is not None:
        gaps.append((gap_start, last_empty))
    return triples, gaps


def _refine_steep(
    shape: SegmentShape, step: float, triples: list[tuple[float, float, float, int, str]]
) -> list[tuple[float, float, float, int, str]]:
    """Re-sample segments whose |Δσ| exceeds the median by STEEP_MEDIAN_FACTOR, keeping each branch in its slot"""
    by_branch: dict[int, list[tuple[float, float, float, int, str]]] = {}
    for t in triples:
        by_branch.setdefault(t[3], []).append(t)
    jumps = [
        abs(q[2] - p[2])
        for branch in by_branch.values()
        for p, q in zip(branch, branch[1:])
        if q[0] - p[0] <= step * 1.5
    ]
    if not jumps:
        return triples
    threshold = STEEP_MEDIAN_FACTOR * float(np.median(jumps))
    fine = step / STEEP_REFINEMENT_FACTOR
    added = []
    for branch_id, branch in by_branch.items():
        for p, q in zip(branch, branch[1:]):
            if q[0] - p[0] > step * 1.5 or abs(q[2] - p[2]) <= threshold:
                continue
            for k in range(1, STEEP_REFINEMENT_FACTOR):
                X = round(p[0] + k * fine, 12)
                same_slot = [r.b for r in _isolate(shape, X).roots if _slot(r) == p[4]]
                if not same_slot:
                    continue
                added.append((X, same_slot[0], _sigma(shape, X, same_slot[0]), branch_id, p[4]))
    if added:
        logger.debug(f"steep refinement at a={shape.a} added {len(added)} points (threshold |Δσ| > {threshold:.3e})")
    return triples + added


def _sigma(shape: SegmentShape, X: float, b: float) -> float:
    return sigma_implied(shape, WaterPlane.non_archimedean(shape, X, b))


def sweep_branches(
    shape: SegmentShape,
    step: float = DEFAULT_SWEEP_STEP,
    refine_steep: bool = True,
    *,
    classify: bool = True,
    workers: int = SWEEP_WORKERS,
) -> SweepCurve:
    """
    Trace the branches of E = 0 over the X grid.

    Root isolation per abscissa may run on several threads; branch assembly is a
    sequential pass over the grid, so the result does not depend on the worker
    count.
    """
    grid = sweep_grid(shape, step)
    isolations = _isolate_all(shape, grid, workers)
    linked, gaps = _assemble(isolations)
    triples = [(X, b, _sigma(shape, X, b), branch_id, slot) for X, b, branch_id, slot in linked]
    if refine_steep:
        triples = _refine_steep(shape, step, triples)
    triples.sort(key=lambda t: (t[3], t[0]))

    points = []
    for X, b, sigma, branch_id, _ in triples:
        stability = classify_equilibrium(shape, X, b, sigma) if classify else None
        points.append(
            SweepPoint(X=X, b=b, sigma=sigma, branch_id=branch_id, stability=stability, case=root_case(X))
        )
    logger.info(
        f"swept a={shape.a} at step {step}: {len(grid)} abscissae, {len(points)} points, "
        f"{len({p.branch_id for p in points})} branches, {len(gaps)} gaps"
    )
    return SweepCurve(a=shape.a, step=step, points=points, gaps=gaps)


def _format(value: float) -> str:
    return f"{value:.{CSV_SIGNIFICANT_DIGITS}g}"


def export_curve(curve: SweepCurve, format: str = "csv") -> bytes:
    """Serialize a sweep curve; csv rows follow CSV_HEADER"""
    if format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for p in curve.points:
            writer.writerow(
                [
                    _format(p.X),
                    _format(p.b),
                    _format(p.sigma),
                    p.branch_id,
                    p.stability.label if p.stability else "",
                    p.case.value,
                ]
            )
        return buffer.getvalue().encode("utf-8")
    if format == "json":
        payload = curve.model_dump(mode="json")
        for point, source in zip(payload["points"], curve.points):
            point["stability_label"] = source.stability.label if source.stability else None
        return json.dumps(payload, indent=2).encode("utf-8")
    raise ValueError(f"unknown export format '{format}', expected one of {EXPORT_FORMATS}")
