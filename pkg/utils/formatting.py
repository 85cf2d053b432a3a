"""
Human-readable tables for equilibria, regions and classifications
"""

from typing import Any, Optional

from config import OUTPUT_DECIMALS


def format_number(value: Optional[float], decimals: int = OUTPUT_DECIMALS) -> str:
    if value is None:
        return "-"
    return f"{value:.{decimals}f}"


def format_pair(pair: Optional[tuple[float, float]], decimals: int = OUTPUT_DECIMALS) -> str:
    if pair is None:
        return "-"
    return f"({format_number(pair[0], decimals)}, {format_number(pair[1], decimals)})"


def render_table(headers: list[str], rows: list[list[Any]]) -> str:
    """Left-aligned fixed-width table with a dashed rule under the header"""
    cells = [[str(c) for c in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def render_mapping(items: list[tuple[str, Any]]) -> str:
    """Two-column 'key: value' block"""
    width = max((len(k) for k, _ in items), default=0)
    return "\n".join(f"{k.ljust(width)} : {v}" for k, v in items)
