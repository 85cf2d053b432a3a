"""
Data models for tool responses
"""

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

ToolStatus = Literal["success", "error", "invalid_arguments", "no_convergence"]

# Process exit code for every tool status; the command line returns these
EXIT_CODES: dict[str, int] = {
    "success": 0,
    "error": 1,
    "invalid_arguments": 2,
    "no_convergence": 3,
}


class ToolOutput(BaseModel):
    """Standardized output format for all tools"""

    status: ToolStatus = "success"
    content: Optional[str] = Field(None, description="The rendered result or the error message")
    content_type: Literal["text", "json", "csv"] = "text"
    metadata: Optional[dict[str, Any]] = Field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]
