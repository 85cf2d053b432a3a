"""
Paraboloid Float MCP Server - Main server implementation

This module implements the MCP (Model Context Protocol) server that exposes the
floating-paraboloid numerics as callable tools: the global equilibrium search,
the classification of a single position, the branch sweep and the no-solution
region.

Key Components:
- MCP Server: Handles protocol communication and tool discovery
- Tool Registry: Maps tool names to their implementations
- Request Handler: Routes incoming tool calls and returns JSON ToolOutput responses
- Configuration: Version metadata and numeric defaults from config.py

The server runs on stdio (standard input/output) and communicates using JSON-RPC messages
as defined by the MCP protocol. All logging goes to stderr.
"""

import asyncio
import logging
import sys
from datetime import datetime
from typing import Any

from mcp.server import Server
from mcp.server.models import InitializationOptions
from mcp.server.stdio import stdio_server
from mcp.types import ServerCapabilities, TextContent, Tool, ToolsCapability

from config import (
    CUBIC_PROBE_STEP,
    CUBIC_PROBE_THRESHOLD,
    DEDUP_TOLERANCE,
    DEFAULT_SWEEP_STEP,
    EIGEN_TOLERANCE_FACTOR,
    RESIDUAL_TOLERANCE,
    SWEEP_WORKERS,
    ZERO_ABSCISSA_TOLERANCE,
    __author__,
    __updated__,
    __version__,
)
from tools import ClassifyTool, RegionTool, SolveTool, SweepTool
from tools.models import ToolOutput
from utils import configure_logging

logger = logging.getLogger(__name__)

# Create the MCP server instance with a unique name identifier
server: Server = Server("paraboloid-float")

# Tools are instantiated once and reused across requests (stateless design)
TOOLS = {
    "solve": SolveTool(),  # Every equilibrium at one density
    "classify": ClassifyTool(),  # Conditions and stability at one position
    "sweep": SweepTool(),  # Branch diagram data
    "region": RegionTool(),  # Abscissae without a non-archimedean equilibrium
}


def numeric_defaults() -> dict[str, Any]:
    return {
        "sweep_step": DEFAULT_SWEEP_STEP,
        "sweep_workers": SWEEP_WORKERS,
        "residual_tolerance": RESIDUAL_TOLERANCE,
        "dedup_tolerance": DEDUP_TOLERANCE,
        "zero_abscissa_tolerance": ZERO_ABSCISSA_TOLERANCE,
        "eigen_tolerance_factor": EIGEN_TOLERANCE_FACTOR,
        "cubic_probe_step": CUBIC_PROBE_STEP,
        "cubic_probe_threshold": CUBIC_PROBE_THRESHOLD,
    }


@server.list_tools()
async def handle_list_tools() -> list[Tool]:
    """
    List all available tools with their descriptions and input schemas.

    Returns:
        List of Tool objects representing all available tools
    """
    logger.debug("MCP client requested tool list")
    tools = [
        Tool(
            name=tool.name,
            description=tool.description,
            inputSchema=tool.get_input_schema(),
        )
        for tool in TOOLS.values()
    ]

    # Utility tool reporting server metadata
    tools.append(
        Tool(
            name="get_version",
            description=(
                "VERSION & CONFIGURATION - Get server version, the numeric defaults of the solver "
                "and the list of available tools."
            ),
            inputSchema={"type": "object", "properties": {}},
        )
    )

    logger.debug(f"Returning {len(tools)} tools to MCP client")
    return tools


@server.call_tool()
async def handle_call_tool(name: str, arguments: dict[str, Any]) -> list[TextContent]:
    """
    Route a tool call to the registered tool or to the version utility.

    Unknown tool names are answered with a text message, never an exception.
    """
    logger.info(f"MCP tool call: {name}")
    logger.debug(f"MCP tool arguments: {list((arguments or {}).keys())}")

    if name in TOOLS:
        result = await TOOLS[name].execute(arguments or {})
        logger.info(f"Tool '{name}' execution completed")
        return result

    elif name == "get_version":
        return await handle_get_version()

    else:
        return [TextContent(type="text", text=f"Unknown tool: {name}")]


async def handle_get_version() -> list[TextContent]:
    """Version, numeric defaults and available tools"""
    version_info = {
        "version": __version__,
        "updated": __updated__,
        "author": __author__,
        "python_version": f"{sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}",
        "server_started": datetime.now().isoformat(),
        "available_tools": list(TOOLS.keys()) + ["get_version"],
        "defaults": numeric_defaults(),
    }

    text = f"""Paraboloid Float MCP Server v{__version__}
Updated: {__updated__}
Author: {__author__}

Numeric defaults:
{chr(10).join(f"  - {key}: {value}" for key, value in version_info["defaults"].items())}

Python: {version_info["python_version"]}
Started: {version_info["server_started"]}

Available Tools:
{chr(10).join(f"  - {tool}" for tool in version_info["available_tools"])}"""

    tool_output = ToolOutput(status="success", content=text, content_type="text", metadata=version_info)
    return [TextContent(type="text", text=tool_output.model_dump_json())]


async def main():
    """
    Main entry point for the MCP server.

    Configures logging and serves the tools over stdio until the client
    disconnects.
    """
    level = configure_logging()
    logger.info("Paraboloid Float MCP Server starting up...")
    logger.info(f"Log level: {level}")
    logger.info(f"Available tools: {list(TOOLS.keys())}")

    async with stdio_server() as (read_stream, write_stream):
        await server.run(
            read_stream,
            write_stream,
            InitializationOptions(
                server_name="paraboloid-float",
                server_version=__version__,
                capabilities=ServerCapabilities(tools=ToolsCapability()),
            ),
        )


if __name__ == "__main__":
    asyncio.run(main())
