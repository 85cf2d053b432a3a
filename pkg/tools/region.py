"""
Region tool - abscissae without any equilibrium of the non-archimedean case
"""

import json

from paraboloid import NoSolutionRegion, no_solution_region
from utils import format_number, render_mapping

from .base import BaseTool, ToolRequest
from .models import ToolOutput


class RegionRequest(ToolRequest):
    """Request model for the region tool"""


def _interval(region: NoSolutionRegion) -> str:
    if region.X_interval is None:
        return "empty"
    lo, hi = region.X_interval
    left = "[" if region.lower_closed else "("
    right = "]" if region.upper_closed else ")"
    return f"{left}{format_number(lo)}, {format_number(hi)}{right}"


class RegionTool(BaseTool):
    def get_name(self) -> str:
        return "region"

    def get_description(self) -> str:
        return (
            "NO-SOLUTION REGION - Reports the abscissae X < 0 for which the equilibrium condition has "
            "no solution b < 0, with the constants a1, γ, δ and the bounds X1, X2 that delimit it."
        )

    def get_request_model(self) -> type[ToolRequest]:
        return RegionRequest

    def run(self, request: RegionRequest) -> ToolOutput:
        region = no_solution_region(request.shape())
        metadata = {"applicable_case": region.applicable_case.value}
        if request.format == "json":
            payload = {"input": request.shape_input(), "region": region.model_dump(mode="json")}
            return ToolOutput(content=json.dumps(payload, indent=2), content_type="json", metadata=metadata)
        if request.format == "csv":
            header = "a,a1,gamma,delta,X1,X2,case,lower,upper"
            lo, hi = region.X_interval or (None, None)
            values = [region.a, region.a1, region.gamma, region.delta, region.X1, region.X2]
            values += [region.applicable_case.value, lo, hi]
            row = ",".join("" if v is None else str(v) for v in values)
            return ToolOutput(content=f"{header}\n{row}\n", content_type="csv", metadata=metadata)
        items = [
            ("a", format_number(region.a)),
            ("a1", format_number(region.a1)),
            ("gamma", format_number(region.gamma)),
            ("delta", format_number(region.delta)),
            ("X1", format_number(region.X1)),
            ("X2", format_number(region.X2)),
            ("case", region.applicable_case.value),
            ("no solution for X in", _interval(region)),
        ]
        return ToolOutput(content=render_mapping(items), metadata=metadata)
