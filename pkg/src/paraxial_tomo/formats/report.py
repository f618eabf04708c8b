"""Plain-text ``key = value`` reports and the shared line grammar."""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import pendulum

from paraxial_tomo.errors import ConfigSyntaxError


def iter_assignments(text: str) -> Iterator[tuple[int, str, str]]:
    """Yield (line number, key, value) for every assignment line.

    ``#`` starts a comment; blank and comment-only lines are skipped.

    Raises:
        ConfigSyntaxError: If a non-empty line has no ``=`` or an empty key.
    """
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigSyntaxError(raw.strip(), number)
        yield number, key, value.strip()


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (list, tuple, np.ndarray)):
        return ", ".join(format_value(item) for item in value)
    if value is None:
        return "none"
    return str(value)


def write_report(
    path: Union[str, Path],
    entries: Mapping[str, Any],
    title: Optional[str] = None,
) -> Path:
    """Write a report with a ``generated_at`` timestamp followed by ``entries``."""
    lines = []
    if title:
        lines.append(f"# {title}")
    lines.append(f"generated_at = {pendulum.now('UTC').to_iso8601_string()}")
    for key, value in entries.items():
        lines.append(f"{key} = {format_value(value)}")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_report(path: Union[str, Path]) -> dict[str, str]:
    """Read a report back as raw strings keyed by name."""
    text = Path(path).read_text(encoding="utf-8")
    return {key: value for _, key, value in iter_assignments(text)}
