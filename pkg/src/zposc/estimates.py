"""Estimate tables: named quantities with errors, references, and z-scores.

Serialized as CSV with columns (name, estimate, se, n_eff, reference, z)
using 12-significant-digit decimals, and as JSON documents carrying a
top-level schema version.  Both forms round-trip.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import Iterable

SCHEMA_VERSION = 1

_CSV_HEADER = "name,estimate,se,n_eff,reference,z"


def fmt(value: float) -> str:
    """Canonical 12-significant-digit rendering used in all delimited output."""
    return f"{value:.12g}"


@dataclass(frozen=True)
class EstimateRow:
    name: str
    estimate: float
    se: float
    n_eff: int
    reference: float

    @property
    def z(self) -> float:
        if self.se == 0.0:
            return 0.0 if self.estimate == self.reference else float("inf")
        return (self.estimate - self.reference) / self.se


@dataclass(frozen=True)
class EstimateTable:
    rows: tuple[EstimateRow, ...]

    @classmethod
    def build(cls, rows: Iterable[EstimateRow]) -> "EstimateTable":
        return cls(tuple(rows))

    def __iter__(self):
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def row(self, name: str) -> EstimateRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def max_abs_z(self) -> float:
        return max((abs(r.z) for r in self.rows), default=0.0)

    # -- serialization -------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(_CSV_HEADER + "\n")
        for r in self.rows:
            buf.write(
                f"{r.name},{fmt(r.estimate)},{fmt(r.se)},{r.n_eff},"
                f"{fmt(r.reference)},{fmt(r.z)}\n"
            )
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "EstimateTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != _CSV_HEADER:
            raise ValueError(f"bad estimate CSV header: {lines[:1]}")
        rows = []
        for ln in lines[1:]:
            name, est, se, n_eff, ref, _z = ln.split(",")
            rows.append(
                EstimateRow(name, float(est), float(se), int(n_eff), float(ref))
            )
        return cls(tuple(rows))

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "rows": [
                {
                    "name": r.name,
                    "estimate": r.estimate,
                    "se": r.se,
                    "n_eff": r.n_eff,
                    "reference": r.reference,
                    "z": r.z,
                }
                for r in self.rows
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "EstimateTable":
        doc = json.loads(text)
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {doc.get('schema_version')}")
        rows = [
            EstimateRow(
                r["name"], r["estimate"], r["se"], r["n_eff"], r["reference"]
            )
            for r in doc["rows"]
        ]
        return cls(tuple(rows))

    def render_text(self) -> str:
        """Aligned human-readable table."""
        header = ("quantity", "estimate", "se", "n_eff", "reference", "z")
        body = [
            (r.name, fmt(r.estimate), fmt(r.se), str(r.n_eff), fmt(r.reference),
             f"{r.z:+.2f}")
            for r in self.rows
        ]
        widths = [
            max(len(header[i]), *(len(row[i]) for row in body)) if body else len(header[i])
            for i in range(6)
        ]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
        for row in body:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
        return "\n".join(lines) + "\n"
