"""JSON-compatible model files with ``#`` line comments."""

from __future__ import annotations

import json
from pathlib import Path


def strip_comments(text: str) -> str:
    """Drop everything from an unquoted ``#`` to the end of its line."""
    out = []
    for line in text.splitlines():
        in_string = False
        escaped = False
        cut = len(line)
        for i, ch in enumerate(line):
            if escaped:
                escaped = False
            elif ch == "\\" and in_string:
                escaped = True
            elif ch == '"':
                in_string = not in_string
            elif ch == "#" and not in_string:
                cut = i
                break
        out.append(line[:cut])
    return "\n".join(out)


def loads(text: str) -> dict:
    obj = json.loads(strip_comments(text))
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object at top level")
    return obj


def load_path(path: str | Path) -> dict:
    return loads(Path(path).read_text(encoding="utf-8"))


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"
