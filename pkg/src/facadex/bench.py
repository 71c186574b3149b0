"""Cognitive-complexity token counting and the input-size scaling
harness."""

from __future__ import annotations

import json
import re
import statistics
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .errors import ConfigError, ResourceLimitError
from .query import ExecutionContext, execute_query

#: token delimiters: double quote, parens, braces, comma, semicolon,
#: newline, tab, carriage return, and space
DELIMITERS = '"(){},;\n\t\r '

_SPLIT = re.compile("[" + re.escape(DELIMITERS) + "]")

LOCATION_PLACEHOLDER = "%LOCATION%"
DEFAULT_BYTE_BUDGET = 256 * 1024 * 1024


def tokenize(text: str) -> List[str]:
    """Split on the delimiter set; empty fragments dropped."""
    return [t for t in _SPLIT.split(text) if t]


@dataclass(frozen=True)
class TokenStats:
    total: int
    distinct: int
    per_file: Tuple[Tuple[str, int, int], ...]
    avg_total: float
    avg_distinct: float


def token_stats(files: Sequence[Tuple[str, str]]) -> TokenStats:
    """Per-file token counts plus arithmetic-mean averages.

    `files` is a sequence of (name, text) pairs.
    """
    if not files:
        raise ConfigError("token_stats needs at least one file")
    per_file = []
    all_tokens: List[str] = []
    for name, text in files:
        tokens = tokenize(text)
        per_file.append((name, len(tokens), len(set(tokens))))
        all_tokens.extend(tokens)
    return TokenStats(
        total=len(all_tokens),
        distinct=len(set(all_tokens)),
        per_file=tuple(per_file),
        avg_total=statistics.fmean(t for _, t, _ in per_file),
        avg_distinct=statistics.fmean(d for _, _, d in per_file),
    )


def generate_scaled_array(template: dict, size: int) -> list:
    """`size` copies of the template, each stamped with its 1-based
    index under the ``id`` key."""
    return [{**template, "id": i} for i in range(1, size + 1)]


def scale_harness(
    template: dict,
    sizes: Sequence[int],
    query: str,
    runs: int = 3,
    byte_budget: int = DEFAULT_BYTE_BUDGET,
    workdir: Optional[str] = None,
) -> List[Tuple[int, int, float]]:
    """Time triplify+query over arrays of increasing size.

    The query must contain ``%LOCATION%``, replaced with the path of the
    generated JSON file. Returns (size, run, elapsed_ms) rows.
    """
    if LOCATION_PLACEHOLDER not in query:
        raise ConfigError(f"query does not contain {LOCATION_PLACEHOLDER}")
    rows: List[Tuple[int, int, float]] = []
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        for size in sizes:
            payload = json.dumps(generate_scaled_array(template, size))
            if len(payload) > byte_budget:
                raise ResourceLimitError(
                    f"size {size} input of {len(payload)} bytes exceeds the"
                    f" {byte_budget}-byte budget"
                )
            path = Path(tmp) / f"scale_{size}.json"
            path.write_text(payload)
            sized_query = query.replace(LOCATION_PLACEHOLDER, str(path))
            for run in range(1, runs + 1):
                start = time.perf_counter()
                execute_query(sized_query, ExecutionContext(base_directory=tmp))
                elapsed_ms = (time.perf_counter() - start) * 1000.0
                rows.append((size, run, elapsed_ms))
    return rows


def median_by_size(rows: Sequence[Tuple[int, int, float]]) -> List[Tuple[int, float]]:
    by_size: dict = {}
    for size, _, elapsed in rows:
        by_size.setdefault(size, []).append(elapsed)
    return [(size, statistics.median(v)) for size, v in sorted(by_size.items())]


def rows_to_csv(rows: Sequence[Tuple[int, int, float]]) -> str:
    lines = ["size,run,elapsed_ms"]
    lines.extend(f"{size},{run},{elapsed:.3f}" for size, run, elapsed in rows)
    return "\n".join(lines) + "\n"
