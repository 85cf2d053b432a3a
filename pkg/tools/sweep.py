"""
Sweep tool - the branches of the equilibrium condition over the X grid
"""

from typing import Literal

from pydantic import Field

from config import DEFAULT_SWEEP_STEP, SWEEP_WORKERS
from paraboloid import SweepCurve, export_curve, sweep_branches
from utils import format_number, render_table

from .base import BaseTool, ToolRequest
from .models import ToolOutput


class SweepRequest(ToolRequest):
    """Request model for the sweep tool"""

    format: Literal["table", "csv", "json"] = Field("csv", description="Output format; csv is the diagram data file")
    step: float = Field(DEFAULT_SWEEP_STEP, gt=0, description="Spacing of the X grid")
    refine: bool = Field(True, description="Re-sample steep branch segments at step/100")
    classify: bool = Field(True, description="Attach a stability verdict to every point")
    workers: int = Field(SWEEP_WORKERS, ge=1, description="Threads evaluating the X grid")


def summarize_branches(curve: SweepCurve) -> str:
    headers = ["branch", "points", "X from", "X to", "sigma min", "sigma max"]
    rows = []
    for branch_id in curve.branch_ids:
        points = curve.branch(branch_id)
        sigmas = [p.sigma for p in points]
        rows.append(
            [
                branch_id,
                len(points),
                format_number(points[0].X),
                format_number(points[-1].X),
                format_number(min(sigmas)),
                format_number(max(sigmas)),
            ]
        )
    lines = [f"Branches of E = 0 for a = {format_number(curve.a)} at step {curve.step}", "", render_table(headers, rows)]
    for lo, hi in curve.gaps:
        lines.append(f"no root for X in [{format_number(lo)}, {format_number(hi)}]")
    return "\n".join(lines)


class SweepTool(BaseTool):
    """Branch diagram data for one segment"""

    def get_name(self) -> str:
        return "sweep"

    def get_description(self) -> str:
        return (
            "TRACE EQUILIBRIUM BRANCHES - Samples the abscissa X on a grid inside the basis circle, "
            "finds every slope b solving the equilibrium condition there and links the roots into "
            "branches. Each point carries the density σ it floats at, so the output is the data of "
            "the (X, σ) branch diagram. CSV columns: X, b, sigma, branch, stability, case."
        )

    def get_request_model(self) -> type[ToolRequest]:
        return SweepRequest

    def run(self, request: SweepRequest) -> ToolOutput:
        curve = sweep_branches(
            request.shape(), request.step, request.refine, classify=request.classify, workers=request.workers
        )
        metadata = {"points": len(curve.points), "branches": len(curve.branch_ids), "gaps": len(curve.gaps)}
        if request.format == "table":
            return ToolOutput(content=summarize_branches(curve), metadata=metadata)
        content = export_curve(curve, request.format).decode("utf-8")
        return ToolOutput(content=content, content_type=request.format, metadata=metadata)
