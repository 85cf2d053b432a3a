"""
Solve tool - every floating position of a segment at a given density
"""

import csv
import io
import json
from typing import Any, Optional

from pydantic import Field, field_validator

from config import CSV_SIGNIFICANT_DIGITS, DEFAULT_SWEEP_STEP, SWEEP_WORKERS
from paraboloid import Equilibrium, EquilibriumSearch, SearchOptions, search_equilibria
from paraboloid.conditions import validate_density
from utils import format_number, format_pair, render_table

from .base import BaseTool, ToolRequest
from .models import ToolOutput

SOLVE_CSV_HEADER = (
    "side",
    "case",
    "X",
    "b",
    "c",
    "sigma",
    "tilt_deg",
    "stability",
    "lambda_min",
    "lambda_max",
    "residual_E",
    "residual_F",
)


class SolveRequest(ToolRequest):
    """Request model for the solve tool"""

    density: float = Field(..., description="Relative density σ of the segment, in (0, 1)")
    step: float = Field(DEFAULT_SWEEP_STEP, gt=0, description="Spacing of the X grid the branches are traced on")
    refine: bool = Field(True, description="Re-sample steep branch segments at step/100")
    tolerance: Optional[float] = Field(None, gt=0, description="Residual bound on |E| and |F|/V (default 1e-8)")
    workers: int = Field(SWEEP_WORKERS, ge=1, description="Threads evaluating the X grid")

    @field_validator("density")
    @classmethod
    def _density_in_unit_interval(cls, value: float) -> float:
        return validate_density(value)

    def options(self) -> SearchOptions:
        overrides: dict[str, Any] = {"sweep_step": self.step, "refine_steep": self.refine, "workers": self.workers}
        if self.tolerance is not None:
            overrides["residual_tolerance"] = self.tolerance
        return SearchOptions(**overrides)


def _csv_number(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.{CSV_SIGNIFICANT_DIGITS}g}"


def equilibrium_record(eq: Equilibrium) -> dict[str, Any]:
    record = eq.model_dump(mode="json")
    record["stability_label"] = eq.stability.label
    return record


def render_equilibria(equilibria: list[Equilibrium]) -> str:
    headers = ["side", "case", "X", "b", "c", "sigma", "tilt", "stability", "eigenvalues", "residuals (E, F)"]
    rows = [
        [
            eq.side.value,
            eq.case_kind.value,
            format_number(eq.X),
            format_number(eq.b),
            format_number(eq.c),
            format_number(eq.sigma),
            format_number(eq.tilt_deg, 3),
            eq.stability.label,
            format_pair(eq.stability.eigenvalues),
            f"({eq.residuals[0]:.1e}, {eq.residuals[1]:.1e})",
        ]
        for eq in equilibria
    ]
    return render_table(headers, rows)


class SolveTool(BaseTool):
    """Global equilibrium search for one segment and one density"""

    def get_name(self) -> str:
        return "solve"

    def get_description(self) -> str:
        return (
            "FIND ALL FLOATING POSITIONS - Lists every equilibrium of the paraboloid segment "
            "{x² + y² <= z <= a} floating with relative density σ: the upright and tilted positions "
            "whose waterline misses the basis circle, the positions whose waterline cuts it, and the "
            "horizontal position at σ = 1/2. Each position carries its tilt angle and a stability "
            "verdict (stable, saddle or degenerate) from the Hessian of the potential energy."
        )

    def get_request_model(self) -> type[ToolRequest]:
        return SolveRequest

    def run(self, request: SolveRequest) -> ToolOutput:
        shape = request.shape()
        options = request.options()
        search = search_equilibria(shape, request.density, options)
        diagnostics = search.diagnostics
        status = "no_convergence" if diagnostics.all_failed else "success"
        metadata = {
            "equilibria": len(search.equilibria),
            "candidates": diagnostics.candidates,
            "failures": len(diagnostics.failures),
            "folds": diagnostics.folds,
        }

        if request.format == "json":
            payload = {
                "input": {**request.shape_input(), "density": request.density, "options": options.model_dump()},
                "equilibria": [equilibrium_record(eq) for eq in search.equilibria],
                "diagnostics": diagnostics.model_dump(mode="json"),
            }
            return ToolOutput(status=status, content=json.dumps(payload, indent=2), content_type="json", metadata=metadata)
        if request.format == "csv":
            return ToolOutput(status=status, content=self._csv(search), content_type="csv", metadata=metadata)
        return ToolOutput(status=status, content=self._table(shape.a, request.density, search), metadata=metadata)

    def _csv(self, search: EquilibriumSearch) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SOLVE_CSV_HEADER)
        for eq in search.equilibria:
            writer.writerow(
                [
                    eq.side.value,
                    eq.case_kind.value,
                    _csv_number(eq.X),
                    _csv_number(eq.b),
                    _csv_number(eq.c),
                    _csv_number(eq.sigma),
                    _csv_number(eq.tilt_deg),
                    eq.stability.label,
                    _csv_number(eq.stability.eigenvalues[0]),
                    _csv_number(eq.stability.eigenvalues[1]),
                    _csv_number(eq.residuals[0]),
                    _csv_number(eq.residuals[1]),
                ]
            )
        return buffer.getvalue()

    def _table(self, a: float, density: float, search: EquilibriumSearch) -> str:
        title = f"Equilibria of the segment a = {format_number(a)} at density σ = {format_number(density)}"
        if not search.equilibria:
            body = "No equilibria found"
        else:
            body = render_equilibria(search.equilibria)
        lines = [title, "", body]
        diagnostics = search.diagnostics
        if diagnostics.folds:
            lines.append(f"\n{diagnostics.folds} pair(s) of equilibria merged at a fold")
        for failure in diagnostics.failures:
            lines.append(f"skipped {failure}")
        return "\n".join(lines)
