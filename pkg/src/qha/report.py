"""Named checks with tolerances; the verdict is always derived from them."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


def _passes(value, tolerance) -> bool:
    if tolerance is None:
        return True  # informational entry
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return False
    if isinstance(tolerance, (list, tuple)):
        lo, hi = tolerance
        return bool(lo <= value <= hi)
    return bool(value <= tolerance)


@dataclass(frozen=True)
class NormEntry:
    name: str
    value: Any
    tolerance: Any = None
    paper_anchor: str = "plumbing"

    @property
    def passed(self) -> bool:
        return _passes(self.value, self.tolerance)

    def to_dict(self) -> dict:
        tol = list(self.tolerance) if isinstance(self.tolerance, tuple) else self.tolerance
        return {"name": self.name, "value": _clean(self.value), "tolerance": tol,
                "pass": self.passed, "paper_anchor": self.paper_anchor}


def _clean(v):
    if isinstance(v, (bool, type(None), str)):
        return v
    if isinstance(v, complex):
        return abs(v)
    v = float(v)
    return v if math.isfinite(v) else None


@dataclass
class NormReport:
    entries: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, name: str, value, tolerance=None, paper_anchor: str = "plumbing") -> NormEntry:
        e = NormEntry(name, _clean(value), tolerance, paper_anchor)
        self.entries.append(e)
        return e

    def extend(self, other: "NormReport", prefix: str = "") -> "NormReport":
        for e in other.entries:
            self.entries.append(NormEntry(prefix + e.name, e.value, e.tolerance, e.paper_anchor))
        return self

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def __getitem__(self, name: str) -> NormEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def with_tolerances(self, overrides: dict) -> "NormReport":
        """Copy with the tolerances of the named entries replaced."""
        rep = NormReport(metadata=dict(self.metadata))
        for e in self.entries:
            tol = overrides.get(e.name, e.tolerance)
            rep.entries.append(NormEntry(e.name, e.value, tol, e.paper_anchor))
        return rep

    def failures(self) -> list:
        return [e for e in self.entries if not e.passed]

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries], "metadata": self.metadata}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "NormReport":
        rep = cls(metadata=dict(data.get("metadata", {})))
        for e in data.get("entries", []):
            tol = e.get("tolerance")
            tol = tuple(tol) if isinstance(tol, list) else tol
            entry = NormEntry(e["name"], e["value"], tol, e.get("paper_anchor", "plumbing"))
            if entry.passed != e.get("pass", entry.passed):
                raise ValueError(f"entry {e['name']!r}: stored verdict disagrees with value/tolerance")
            rep.entries.append(entry)
        return rep

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "value", "tolerance", "pass", "paper_anchor"])
        for e in self.entries:
            d = e.to_dict()
            tol = d["tolerance"]
            tol = ";".join(repr(t) for t in tol) if isinstance(tol, list) else ("" if tol is None else repr(tol))
            val = "" if d["value"] is None else repr(d["value"])
            w.writerow([d["name"], val, tol, d["pass"], d["paper_anchor"]])
        return buf.getvalue()


def emit_report(report: NormReport, path, fmt: str = "json") -> Path:
    path = Path(path)
    if fmt == "json":
        text = report.to_json()
    elif fmt == "csv":
        text = report.to_csv()
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path


def load_report(path) -> NormReport:
    return NormReport.from_dict(json.loads(Path(path).read_text()))
