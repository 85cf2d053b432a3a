"""
Base class for all Paraboloid Float tools

This module provides the abstract base class that all tools must inherit from.
It defines the contract that tools must implement and provides common functionality
for request validation, error handling, and response formatting.

Key responsibilities:
- Define the tool interface (abstract methods that must be implemented)
- Validate requests with the tool's pydantic model
- Map numerical failures onto tool statuses and exit codes
- Serialize results as MCP TextContent for the server
"""

import asyncio
import logging
from abc import ABC, abstractmethod
from typing import Any, Literal, Optional

from mcp.types import TextContent
from pydantic import BaseModel, Field, ValidationError, model_validator

from paraboloid import ConvergenceError, DomainError, SegmentShape

from .models import EXIT_CODES, ToolOutput

logger = logging.getLogger(__name__)


class ToolRequest(BaseModel):
    """
    Base request model for all tools.

    A segment is given either by its axis length a or by the base angle φ in
    degrees, a = tan²(φ)/4. Tools extend this model with their own parameters.
    """

    axis: Optional[float] = Field(None, gt=0, description="Axis length a of the segment {x² + y² <= z <= a}")
    base_angle: Optional[float] = Field(
        None, gt=0, lt=90, description="Base angle φ in degrees; converted to a = tan²(φ)/4"
    )
    format: Literal["table", "csv", "json"] = Field("table", description="Output format")

    @model_validator(mode="after")
    def _one_shape_input(self):
        if (self.axis is None) == (self.base_angle is None):
            raise ValueError("give exactly one of axis or base_angle")
        return self

    def shape(self) -> SegmentShape:
        if self.axis is not None:
            return SegmentShape(self.axis)
        return SegmentShape.from_base_angle(self.base_angle)

    def shape_input(self) -> dict[str, Any]:
        """The shape as the caller gave it, plus the resulting a"""
        return {"axis": self.axis, "base_angle": self.base_angle, "a": self.shape().a}


def describe_validation_error(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item.get("loc", ()))
        message = item.get("msg", "invalid value").removeprefix("Value error, ")
        parts.append(f"{location}: {message}" if location else message)
    return "; ".join(parts)


class BaseTool(ABC):
    """
    Abstract base class for all tools.

    To create a new tool:
    1. Create a new class that inherits from BaseTool
    2. Define a request model that inherits from ToolRequest
    3. Implement get_name, get_description, get_request_model and run
    4. Register the tool in server.py's TOOLS dictionary and in cli.py
    """

    def __init__(self):
        # Cache tool metadata at initialization to avoid repeated calls
        self.name = self.get_name()
        self.description = self.get_description()

    @abstractmethod
    def get_name(self) -> str:
        """
        Return the unique name identifier for this tool.

        This name is used by MCP clients to invoke the tool and by the command
        line as the subcommand name.
        """
        pass

    @abstractmethod
    def get_description(self) -> str:
        pass

    @abstractmethod
    def get_request_model(self) -> type[ToolRequest]:
        pass

    def get_input_schema(self) -> dict[str, Any]:
        """JSON schema of the request model, as advertised to MCP clients"""
        return self.get_request_model().model_json_schema()

    @abstractmethod
    def run(self, request: ToolRequest) -> ToolOutput:
        """Carry out a validated request; numerical errors propagate to invoke()"""
        pass

    def invoke(self, arguments: dict[str, Any]) -> ToolOutput:
        """
        Validate arguments, run the tool and map failures to a status.

        Never raises: validation failures and domain errors become
        invalid_arguments, convergence failures no_convergence, anything else error.
        """
        logger = logging.getLogger(f"tools.{self.name}")
        logger.info(f"Starting {self.name} tool execution with arguments: {list(arguments.keys())}")
        try:
            request = self.get_request_model()(**arguments)
            logger.debug(f"Request validation successful for {self.name}")
            output = self.run(request)
        except ValidationError as e:
            output = ToolOutput(status="invalid_arguments", content=describe_validation_error(e))
        except DomainError as e:
            output = ToolOutput(status="invalid_arguments", content=str(e))
        except ConvergenceError as e:
            logger.error(f"{self.name} did not converge: {e}")
            output = ToolOutput(status="no_convergence", content=f"Error in {self.name}: {e}")
        except Exception as e:
            # Catch all exceptions to prevent server crashes
            logger.error(f"Error in {self.name} tool execution: {e}", exc_info=True)
            output = ToolOutput(status="error", content=f"Error in {self.name}: {e}")

        output.metadata = {**(output.metadata or {}), "tool": self.name, "exit_code": EXIT_CODES[output.status]}
        if output.status == "success":
            logger.info(f"Successfully completed {self.name} tool execution")
        elif output.status == "invalid_arguments":
            logger.warning(f"Invalid arguments for {self.name}: {output.content}")
        return output

    async def execute(self, arguments: dict[str, Any]) -> list[TextContent]:
        """
        Execute the tool with the provided arguments.

        The numerics run on a worker thread, off the server's event loop.

        Returns:
            List[TextContent]: The ToolOutput as JSON
        """
        output = await asyncio.to_thread(self.invoke, arguments)
        return [TextContent(type="text", text=output.model_dump_json())]
