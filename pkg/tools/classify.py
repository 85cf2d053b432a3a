"""
Classify tool - conditions, potential derivatives and stability at a given position
"""

import json
from typing import Any, Literal

from pydantic import Field, field_validator

from config import RESIDUAL_TOLERANCE
from paraboloid import (
    Side,
    StabilityVerdict,
    WaterPlane,
    classify,
    degenerate_probe,
    evaluate_conditions,
    potential_nonarchimedean,
)
from paraboloid.conditions import validate_density
from paraboloid.models import tilt_angle
from paraboloid.solver import non_archimedean_density
from utils import format_number, format_pair, render_mapping

from .base import BaseTool, ToolRequest
from .models import ToolOutput


class ClassifyRequest(ToolRequest):
    """Request model for the classify tool"""

    X: float = Field(..., description="Abscissa where the waterline meets the basis circle plane, -√a < X < √a")
    b: float = Field(..., lt=0, description="Slope of the waterplane z = bx + c, b < 0")
    density: float = Field(..., description="Relative density σ of the segment, in (0, 1)")
    side: Literal["left", "right"] = Field("left", description="Which side of the waterplane is dry")

    @field_validator("density")
    @classmethod
    def _density_in_unit_interval(cls, value: float) -> float:
        return validate_density(value)


class ClassifyTool(BaseTool):
    """Evaluate one non-archimedean position"""

    def get_name(self) -> str:
        return "classify"

    def get_description(self) -> str:
        return (
            "CLASSIFY A POSITION - Evaluates the floating condition F, the equilibrium condition E, "
            "the gradient and Hessian of the potential energy and the stability verdict at a "
            "user-supplied waterplane (X, b) cutting through the basis circle. A singular Hessian is "
            "resolved by the third derivative of the potential along its null direction."
        )

    def get_request_model(self) -> type[ToolRequest]:
        return ClassifyRequest

    def run(self, request: ClassifyRequest) -> ToolOutput:
        shape = request.shape()
        side = Side(request.side)
        sigma_eff = non_archimedean_density(request.density, side)
        X, b = request.X, request.b

        conditions = evaluate_conditions(shape, WaterPlane.non_archimedean(shape, X, b), sigma_eff)
        potential = potential_nonarchimedean(shape, X, b, sigma_eff)
        verdict = classify(potential.hessian, probe=lambda h: degenerate_probe(shape, X, b, sigma_eff, hessian=h))
        is_equilibrium = max(abs(conditions.E), abs(conditions.F) / shape.volume) <= RESIDUAL_TOLERANCE
        report: dict[str, Any] = {
            "input": {**request.shape_input(), "X": X, "b": b, "density": request.density, "side": side.value},
            "sigma_effective": sigma_eff,
            "E": conditions.E,
            "F": conditions.F,
            "E_tilde": conditions.E_tilde,
            "sigma_implied": conditions.sigma_implied,
            "is_equilibrium": is_equilibrium,
            "tilt_deg": tilt_angle(b, side),
            "gradient": list(potential.grad),
            "hessian": potential.hessian.tolist(),
            "stability": verdict.model_dump(mode="json"),
            "stability_label": verdict.label,
        }
        metadata = {"stability": verdict.label, "is_equilibrium": is_equilibrium}
        if not is_equilibrium:
            report["note"] = f"({X}, {b}) is not an equilibrium at σ={request.density}; verdict describes U there"

        if request.format == "json":
            return ToolOutput(content=json.dumps(report, indent=2), content_type="json", metadata=metadata)
        if request.format == "csv":
            return ToolOutput(content=self._csv(report, verdict), content_type="csv", metadata=metadata)
        return ToolOutput(content=self._table(report, verdict), metadata=metadata)

    def _csv(self, report: dict[str, Any], verdict: StabilityVerdict) -> str:
        header = "X,b,sigma,side,E,F,sigma_implied,stability,lambda_min,lambda_max"
        inp = report["input"]
        values = [
            inp["X"],
            inp["b"],
            inp["density"],
            inp["side"],
            report["E"],
            report["F"],
            report["sigma_implied"],
            verdict.label,
            verdict.eigenvalues[0],
            verdict.eigenvalues[1],
        ]
        return header + "\n" + ",".join(str(v) for v in values) + "\n"

    def _table(self, report: dict[str, Any], verdict: StabilityVerdict) -> str:
        hessian = report["hessian"]
        items = [
            ("a", format_number(report["input"]["a"])),
            ("X", format_number(report["input"]["X"])),
            ("b", format_number(report["input"]["b"])),
            ("side", report["input"]["side"]),
            ("sigma", format_number(report["input"]["density"])),
            ("sigma effective", format_number(report["sigma_effective"])),
            ("sigma implied", format_number(report["sigma_implied"])),
            ("E", f"{report['E']:.3e}"),
            ("F", f"{report['F']:.3e}"),
            ("tilt", format_number(report["tilt_deg"], 3)),
            ("gradient", format_pair(tuple(report["gradient"]))),
            ("hessian", f"[{format_pair(tuple(hessian[0]))}, {format_pair(tuple(hessian[1]))}]"),
            ("eigenvalues", format_pair(verdict.eigenvalues)),
            ("stability", verdict.label),
        ]
        detail = verdict.degenerate_detail
        if detail is not None:
            items.append(("null direction", format_pair(detail.null_direction)))
            items.append(("cubic coefficient", format_number(detail.cubic_coefficient)))
        if "note" in report:
            items.append(("note", report["note"]))
        return render_mapping(items)
