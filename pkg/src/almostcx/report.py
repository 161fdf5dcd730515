"""Running suites and serializing their results."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import linalg as la
from .algebra import CoframeIndex, Form, VectorForm, word_indices
from .contraction import EValuedForm
from .errors import AlmostComplexError
from .manifest import Manifest, scalar_json, terms_json
from .scalar import Scalar
from .suites import REGISTRY, Context, Skip, checks_for

SCHEMA = "almostcx-report/1"


@dataclass(frozen=True)
class Record:
    name: str
    anchor: str
    status: str                  # pass | fail | skip
    evaluated: int = 0
    witness: str = ""
    residual: Any = None
    reason: str = ""
    wall_time: float = 0.0

    def to_json(self) -> dict:
        out = {"name": self.name, "anchor": self.anchor, "status": self.status,
               "evaluated": self.evaluated}
        if self.status == "fail":
            out["witness"] = self.witness
            out["residual"] = self.residual
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass
class Report:
    seed: int
    suites: tuple[str, ...]
    manifest_name: str = ""
    records: list[Record] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        c = {"pass": 0, "fail": 0, "skip": 0}
        for r in self.records:
            c[r.status] += 1
        return c

    @property
    def passed(self) -> bool:
        return self.counts["fail"] == 0

    def sorted_records(self) -> list[Record]:
        return sorted(self.records, key=lambda r: r.name)

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "manifest": self.manifest_name, "seed": self.seed,
                "suites": list(self.suites), "summary": self.counts,
                "records": [r.to_json() for r in self.sorted_records()]}


def _vector_terms(v: VectorForm) -> list[dict]:
    return [{"word": [ix.label for ix in word_indices(m)],
             "vector": CoframeIndex.from_pos(p).label, **scalar_json(c)}
            for (m, p), c in sorted(v.items())]


def serialize_residual(r: Any) -> Any:
    if isinstance(r, Form):
        return {"form": terms_json(r)}
    if isinstance(r, VectorForm):
        return {"vector_form": _vector_terms(r)}
    if isinstance(r, EValuedForm):
        return {"section": [terms_json(c) for c in r.components]}
    if isinstance(r, Scalar):
        return scalar_json(r)
    if isinstance(r, tuple):
        return {"matrix": [[scalar_json(x) for x in row] for row in r]}
    if isinstance(r, dict):
        return {str(k): (v if isinstance(v, (bool, int, str)) else str(v)) for k, v in r.items()}
    return str(r)


def is_nonzero(r: Any) -> bool:
    if r is None:
        return False
    if isinstance(r, tuple):
        return not la.is_zero(r)
    return bool(r)


def run_check(chk, ctx: Context) -> Record:
    t0 = time.perf_counter()
    count = 0
    try:
        for label, res in chk.run(ctx):
            count += 1
            if is_nonzero(res):
                return Record(chk.name, chk.anchor, "fail", count, label, serialize_residual(res),
                              wall_time=time.perf_counter() - t0)
    except Skip as e:
        return Record(chk.name, chk.anchor, "skip", count, reason=str(e),
                      wall_time=time.perf_counter() - t0)
    except AlmostComplexError as e:
        return Record(chk.name, chk.anchor, "fail", count, "raised",
                      {"error": f"{type(e).__name__}: {e}"}, wall_time=time.perf_counter() - t0)
    if count == 0:
        return Record(chk.name, chk.anchor, "skip", 0, reason="no applicable inputs",
                      wall_time=time.perf_counter() - t0)
    return Record(chk.name, chk.anchor, "pass", count, wall_time=time.perf_counter() - t0)


def run_suite(manifest: Manifest, suite: str = "all", seed: int | None = None,
              max_degree: int | None = None, n_random: int = 20) -> Report:
    seed = manifest.seed if seed is None else seed
    if max_degree is None:
        max_degree = manifest.max_degree
    ctx = Context(manifest, seed, max_degree, n_random)
    report = Report(seed, (suite,), manifest.name)
    checks = checks_for(suite)
    if suite != "validate" and suite != "all":
        # identity suites assume valid structure data
        checks = [REGISTRY["validate.d_squared"]] + checks
    for chk in checks:
        report.records.append(run_check(chk, ctx))
    ctx.beltramis    # screen manifest inputs even when no check used them
    for name, reason in ctx.skipped:
        report.records.append(Record(f"input.{name}", "Beltrami input", "skip", reason=reason))
    return report


def run_suites(manifest: Manifest, suites, **kw) -> Report:
    suites = tuple(suites)
    if "all" in suites:
        return run_suite(manifest, "all", **kw)
    merged: Report | None = None
    for s in suites:
        rep = run_suite(manifest, s, **kw)
        if merged is None:
            merged = rep
            merged.suites = suites
        else:
            seen = {r.name for r in merged.records}
            merged.records.extend(r for r in rep.records if r.name not in seen)
    return merged if merged is not None else Report(manifest.seed, suites, manifest.name)


def report_json(report: Report) -> str:
    return json.dumps(report.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report_text(report: Report) -> str:
    lines = [f"manifest {report.manifest_name or '-'}  seed {report.seed}  "
             f"suites {', '.join(report.suites)}"]
    width = max((len(r.name) for r in report.records), default=10)
    for r in report.sorted_records():
        line = f"{r.status.upper():4}  {r.name:<{width}}  {r.evaluated:>7}  {r.wall_time:7.3f}s"
        if r.status == "fail":
            line += f"  at {r.witness}"
        elif r.reason:
            line += f"  ({r.reason})"
        lines.append(line)
    c = report.counts
    lines.append(f"{c['pass']} passed, {c['fail']} failed, {c['skip']} skipped")
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str = "json", path: str | Path | None = None) -> str:
    text = report_json(report) if fmt == "json" else report_text(report)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
