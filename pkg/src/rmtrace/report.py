"""Report envelopes and their JSON/CSV/text renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__
from .dyadic import DyadicRational


class UsageError(ValueError):
    """A command-line request that cannot be honored."""


def _default(obj):
    if isinstance(obj, DyadicRational):
        return str(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}" if obj.denominator != 1 else str(obj.numerator)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj).__name__}")


@dataclass
class ReportEnvelope:
    command: list[str]
    payload: dict
    seeds: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "command": self.command,
            "seeds": self.seeds,
            "timestamp": self.timestamp,
            "timing": self.timing,
            "payload": self.payload,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_default) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportEnvelope":
        d = json.loads(text)
        return cls(command=d["command"], payload=d["payload"], seeds=d.get("seeds", {}),
                   timing=d.get("timing", {}), tool_version=d["tool_version"],
                   timestamp=d["timestamp"])


def render_report(payload, fmt: str = "json") -> str:
    """Render a payload. CSV needs a list of flat rows, or a dict with ``rows``."""
    if fmt == "json":
        return json.dumps(payload, indent=2, default=_default) + "\n"
    if fmt == "csv":
        rows = payload.get("rows") if isinstance(payload, dict) else payload
        if not isinstance(rows, list) or not all(isinstance(r, dict) for r in rows):
            raise UsageError("csv output needs a tabular payload")
        buf = io.StringIO()
        if rows:
            keys = list(rows[0])
            w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: json.dumps(v, default=_default) if isinstance(v, (list, dict))
                            else _default(v) if isinstance(v, (DyadicRational, Fraction))
                            else v for k, v in r.items()})
        return buf.getvalue()
    if fmt == "text":
        if not isinstance(payload, dict):
            raise UsageError("text output needs a mapping payload")
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)):
                v = json.dumps(v, default=_default)
            elif isinstance(v, (DyadicRational, Fraction)):
                v = _default(v)
            lines.append(f"{k}: {v}")
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown format {fmt!r}")
