"""Fixed-layout JSON emission with round-trip-exact floats.

The design and coefficient files keep a fixed field order and serialize
every real with 17 significant digits, which is enough to reconstruct the
exact IEEE double on load.
"""

from __future__ import annotations

import json
from typing import Any


def f17(x: float) -> str:
    """Format a float with 17 significant digits (exact double round trip)."""
    return format(float(x), ".17g")


def float_list(xs) -> str:
    return "[" + ", ".join(f17(x) for x in xs) + "]"


def emit_object(fields: list[tuple[str, str]]) -> str:
    """Assemble a one-level JSON object from pre-rendered values, in order."""
    body = ",\n".join(f'  "{key}": {value}' for key, value in fields)
    return "{\n" + body + "\n}\n"


def parse_object(text: str, required: tuple[str, ...]) -> dict[str, Any]:
    """Parse a JSON object and check that every required field is present."""
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    missing = [key for key in required if key not in obj]
    if missing:
        raise ValueError(f"missing fields: {', '.join(missing)}")
    return obj
