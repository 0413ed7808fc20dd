"""Plain-text interchange for signals and tabular results.

A signal file holds one sample per line, optionally preceded by a
``# sample_rate=<int>`` comment. Floats are written with ``repr`` so parsing
an emitted file reproduces the samples exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .errors import DomainError
from .signal_model import Signal

__all__ = ["parse_signal", "emit_signal", "emit_table"]

_RATE_KEY = "sample_rate="


def parse_signal(text: str) -> Signal:
    rate = None
    values = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith(_RATE_KEY):
                try:
                    rate = float(body[len(_RATE_KEY):])
                except ValueError:
                    raise DomainError(f"line {lineno}: bad sample rate {body!r}") from None
            continue
        try:
            values.append(float(line.split(",")[0]))
        except ValueError:
            raise DomainError(f"line {lineno}: not a number: {line!r}") from None
    if not values:
        raise DomainError("signal file contains no samples")
    return Signal(values, rate)


def _fmt_rate(rate: float) -> str:
    return str(int(rate)) if float(rate).is_integer() else repr(float(rate))


def emit_signal(sig: Signal) -> str:
    lines = []
    if sig.sample_rate is not None:
        lines.append(f"# {_RATE_KEY}{_fmt_rate(sig.sample_rate)}")
    lines.extend(repr(float(v)) for v in sig.samples)
    return "\n".join(lines) + "\n"


def _plain(value):
    if isinstance(value, float):
        return float(value) if math.isfinite(value) else str(value)
    if hasattr(value, "item"):
        return _plain(value.item())
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)


def emit_table(rows: list[dict], columns: list[str], fmt: str = "csv") -> str:
    """Render records as CSV (header + rows) or a JSON array of objects."""
    if fmt == "json":
        return json.dumps([{c: _plain(r[c]) for c in columns} for r in rows], indent=2) + "\n"
    if fmt != "csv":
        raise DomainError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        cells = [_plain(r[c]) for c in columns]
        writer.writerow([repr(v) if isinstance(v, float) else v for v in cells])
    return buf.getvalue()
