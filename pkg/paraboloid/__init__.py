"""
Floating positions of a homogeneous paraboloid segment

Numerics for the equilibria of the segment {x² + y² <= z <= a} floating in a
fluid: sector geometry, the floating and equilibrium conditions, root isolation
and the global equilibrium search, stability classification, branch sweeps, and
independent quadrature / finite-difference oracles.
"""

from .conditions import (
    bracket_polynomial,
    e_tilde_and_derivative,
    equilibrium_E,
    evaluate_conditions,
    f_poles,
    floating_F,
    sigma_implied,
)
from .errors import (
    ConvergenceError,
    DegenerateError,
    DomainError,
    InvalidDensity,
    ParaboloidError,
    PoleError,
    ProbeError,
    StencilError,
    ToleranceError,
)
from .geometry import (
    SegmentShape,
    Side,
    WaterPlane,
    archimedean_density_bounds,
    archimedean_valid,
    derived_geometry,
    equilibrium_offset,
    oblique_sector_moments,
    oblique_sector_volume,
    right_sector_moments,
    right_sector_volume,
    sector_volume_derivatives,
    submerged_centroid,
)
from .models import (
    CaseKind,
    Equilibrium,
    EquilibriumSearch,
    NoSolutionRegion,
    SearchOptions,
    StabilityKind,
    StabilityVerdict,
    SweepCurve,
)
from .solver import (
    archimedean_equilibria,
    find_all_equilibria,
    horizontal_equilibrium,
    isolate_equilibrium_roots,
    no_solution_region,
    roots_E_for_X,
    search_equilibria,
)
from .stability import (
    classify,
    classify_equilibrium,
    degenerate_probe,
    horizontal_stability,
    potential_archimedean,
    potential_nonarchimedean,
)
from .sweep import export_curve, sweep_branches

__all__ = [
    "SegmentShape",
    "WaterPlane",
    "Side",
    "derived_geometry",
    "right_sector_volume",
    "oblique_sector_volume",
    "right_sector_moments",
    "oblique_sector_moments",
    "submerged_centroid",
    "equilibrium_offset",
    "sector_volume_derivatives",
    "archimedean_valid",
    "archimedean_density_bounds",
    "sigma_implied",
    "equilibrium_E",
    "floating_F",
    "evaluate_conditions",
    "e_tilde_and_derivative",
    "f_poles",
    "bracket_polynomial",
    "roots_E_for_X",
    "isolate_equilibrium_roots",
    "no_solution_region",
    "archimedean_equilibria",
    "horizontal_equilibrium",
    "search_equilibria",
    "find_all_equilibria",
    "potential_nonarchimedean",
    "potential_archimedean",
    "classify",
    "classify_equilibrium",
    "degenerate_probe",
    "horizontal_stability",
    "sweep_branches",
    "export_curve",
    "CaseKind",
    "Equilibrium",
    "EquilibriumSearch",
    "NoSolutionRegion",
    "SearchOptions",
    "StabilityKind",
    "StabilityVerdict",
    "SweepCurve",
    "ParaboloidError",
    "DomainError",
    "InvalidDensity",
    "PoleError",
    "DegenerateError",
    "ConvergenceError",
    "ProbeError",
    "StencilError",
    "ToleranceError",
]
