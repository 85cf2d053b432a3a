"""
Tool implementations for the Paraboloid Float server and command line
"""

from .classify import ClassifyTool
from .region import RegionTool
from .solve import SolveTool
from .sweep import SweepTool

__all__ = [
    "SolveTool",
    "ClassifyTool",
    "SweepTool",
    "RegionTool",
]
