"""
Configuration and constants for the Paraboloid Float toolkit

This module centralizes all configuration settings for the equilibrium solver,
the branch sweeper, the stability classifier and the command line / MCP front ends.
It defines tolerances, sweep defaults, output precision and other constants used
throughout the application.

Configuration values can be overridden by environment variables where appropriate.
"""

import os

# Version and metadata
# These values are used in tool responses and for tracking releases
# IMPORTANT: This is the single source of truth for version and author info
# Semantic versioning: MAJOR.MINOR.PATCH
__version__ = "1.0.0"
# Last update date in ISO format
__updated__ = "2026-10-18"
# Primary maintainer
__author__ = "Paraboloid Float maintainers"

# Logging
# LOG_LEVEL: DEBUG, INFO, WARNING or ERROR. Logging always goes to stderr so that
# data written to stdout (tables, CSV, JSON, MCP frames) stays clean
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
# LOG_FILE: optional path of a rotating log file (10MB, 2 backups)
LOG_FILE = os.getenv("LOG_FILE", "")

# Sweep configuration
# DEFAULT_SWEEP_STEP: spacing of the X grid used to trace the equilibrium branches.
# 1/100 reproduces the published branch diagrams; steep segments are re-sampled at step/100
DEFAULT_SWEEP_STEP = float(os.getenv("PARABOLOID_SWEEP_STEP", "0.01"))
# STEEP_REFINEMENT_FACTOR: steep segments are re-sampled at step / STEEP_REFINEMENT_FACTOR
STEEP_REFINEMENT_FACTOR = 100
# STEEP_MEDIAN_FACTOR: a segment is steep when its |Δσ| exceeds this multiple of the median |Δσ|
STEEP_MEDIAN_FACTOR = 10.0
# SWEEP_WORKERS: number of threads evaluating grid abscissae (1 = sequential)
SWEEP_WORKERS = int(os.getenv("PARABOLOID_WORKERS", "1"))

# Solver tolerances
# RESIDUAL_TOLERANCE: acceptance bound for |E| and |F|/V of an equilibrium
RESIDUAL_TOLERANCE = float(os.getenv("PARABOLOID_RESIDUAL_TOL", "1e-8"))
# ROOT_CERTIFICATE_FACTOR: every root b of E=0 satisfies |E| <= factor * max(1, V2, A^(5/2))
ROOT_CERTIFICATE_FACTOR = 1e-10
# POLYNOMIAL_CERTIFICATE_FACTOR: roots of the bracket polynomial satisfy
# |P(r)| <= factor * sum|coefficients| * max(1, |r|)^3
POLYNOMIAL_CERTIFICATE_FACTOR = 1e-10
# DOUBLE_ROOT_TOLERANCE: polynomial roots closer than this are one double root
DOUBLE_ROOT_TOLERANCE = 1e-9
# DEDUP_TOLERANCE: equilibria closer than this in (X, b) are the same equilibrium
DEDUP_TOLERANCE = 1e-6
# ZERO_ABSCISSA_TOLERANCE: |X| at or below this is the abscissa X = 0. The root that escapes to
# b -> -inf as X -> 0 lies beyond |b| ~ 1/|X| and cannot be resolved in double precision there
ZERO_ABSCISSA_TOLERANCE = 1e-7
# DEGENERATE_AREA_TOLERANCE: |A| below this multiple of a is the sector boundary A = 0
DEGENERATE_AREA_TOLERANCE = 1e-14
# POLE_TOLERANCE: |f| below this makes the normalized equilibrium function undefined
POLE_TOLERANCE = 1e-12
# DENSITY_HALF_TOLERANCE: the horizontal equilibrium exists only for |sigma - 1/2| <= this
DENSITY_HALF_TOLERANCE = 1e-12

# Newton polish
# MAX_NEWTON_ITERATIONS: iteration cap of the damped 2D Newton polish on (F, E)
MAX_NEWTON_ITERATIONS = 50
# MAX_STEP_HALVINGS: damping halvings before falling back to bisection along the branch
MAX_STEP_HALVINGS = 20
# JACOBIAN_STEP: relative finite-difference step of the Newton Jacobian
JACOBIAN_STEP = 1e-7
# MAX_BRACKET_DOUBLINGS: cap on the downward doubling search for a polynomial sign change
MAX_BRACKET_DOUBLINGS = 60

# Stability classification
# EIGEN_TOLERANCE_FACTOR: tol_eig = factor * max(1, lambda_max)
EIGEN_TOLERANCE_FACTOR = 1e-9
# CUBIC_PROBE_STEP: finite-difference step of the degenerate third-derivative probe
CUBIC_PROBE_STEP = 1e-3
# CUBIC_PROBE_THRESHOLD: |cubic coefficient| above this resolves a degenerate point as unstable
CUBIC_PROBE_THRESHOLD = 1e-6

# Quadrature oracle
# QUADRATURE_TOLERANCE: target error of the adaptive Gauss-Legendre oracle, relative to max(1, value)
QUADRATURE_TOLERANCE = 1e-11
# QUADRATURE_MAX_EVALUATIONS: evaluation budget before ToleranceError
QUADRATURE_MAX_EVALUATIONS = 1_000_000
# QUADRATURE_ORDER: the coarse panel rule is Gauss-Lobatto on this many points plus one, the fine rule
# Gauss-Legendre on twice this many
QUADRATURE_ORDER = 10
# SCAN_QUADRATURE_ORDER: fixed Gauss-Legendre order of the sector volumes in the sign scan
SCAN_QUADRATURE_ORDER = 64

# Output formatting
# OUTPUT_DECIMALS: decimals of table output, matching the published reporting precision
OUTPUT_DECIMALS = 8
# CSV_SIGNIFICANT_DIGITS: significant digits of exported sweep values
CSV_SIGNIFICANT_DIGITS = 12
