"""
Pytest configuration for Paraboloid Float tests
"""

import asyncio
import importlib
import os
import sys
from pathlib import Path

import pytest

# Ensure the parent directory is in the Python path for imports
parent_dir = Path(__file__).resolve().parent.parent
if str(parent_dir) not in sys.path:
    sys.path.insert(0, str(parent_dir))

# Pin the tunable defaults so that a developer's environment cannot change results
os.environ["PARABOLOID_SWEEP_STEP"] = "0.01"
os.environ["PARABOLOID_WORKERS"] = "1"
os.environ["PARABOLOID_RESIDUAL_TOL"] = "1e-8"
os.environ["LOG_FILE"] = ""

# Force reload of config module to pick up the env vars
import config  # noqa: E402

importlib.reload(config)

from paraboloid import SegmentShape, SearchOptions, search_equilibria, sweep_branches  # noqa: E402

# Configure asyncio for Windows compatibility
if sys.platform == "win32":
    asyncio.set_event_loop_policy(asyncio.WindowsSelectorEventLoopPolicy())

# Reference segment: base angle 74.33°, a = tan²(φ)/4
REFERENCE_AXIS = 3.17690918
REFERENCE_DENSITY = 0.51


@pytest.fixture(scope="session")
def ref_shape():
    """The segment with base angle 74.33 degrees, a ≈ 3.17690918"""
    return SegmentShape.from_base_angle(74.33)


@pytest.fixture(scope="session")
def gap_shape():
    """The segment a = 2.5, which has a bounded no-solution region"""
    return SegmentShape(2.5)


@pytest.fixture(scope="session")
def ref_search(ref_shape):
    """Global search at σ = 0.51, shared because the sweep behind it is the slow part"""
    return search_equilibria(ref_shape, REFERENCE_DENSITY, SearchOptions())


@pytest.fixture(scope="session")
def ref_curve(ref_shape):
    return sweep_branches(ref_shape, 0.01)


@pytest.fixture(scope="session")
def gap_curve(gap_shape):
    return sweep_branches(gap_shape, 0.01, classify=False)


# Pytest configuration
def pytest_configure(config):
    """Configure pytest with custom markers"""
    config.addinivalue_line("markers", "asyncio: mark test as async")
    config.addinivalue_line("markers", "slow: runs a full branch sweep or a large property suite")
