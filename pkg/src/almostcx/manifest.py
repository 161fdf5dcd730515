"""JSON manifests describing a frame, named Beltrami differentials and forms.

Rationals are strings ``"a/b"``, complex scalars are ``{"re", "im"}`` objects and
coframe indices are ``"k"`` or ``"kbar"``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .algebra import CoframeIndex, Form, word_indices
from .deformation import Beltrami
from .errors import ParseError, RangeError, RationalError
from .frame import FrameSpec, validate_frame
from .scalar import Scalar

KEYS = ("n", "dtheta", "beltrami", "forms", "tasks", "seed", "max_degree")


@dataclass(frozen=True)
class Manifest:
    n: int
    dtheta: tuple[Form, ...]
    beltrami: dict[str, Beltrami] = field(default_factory=dict)
    forms: dict[str, Form] = field(default_factory=dict)
    tasks: tuple[str, ...] = ("all",)
    seed: int = 0
    max_degree: int | None = None
    name: str = ""

    def spec(self) -> FrameSpec:
        return FrameSpec(self.n, self.dtheta, name=self.name)

    def with_overrides(self, seed: int | None = None, max_degree: int | None = None) -> Manifest:
        kw = dict(self.__dict__)
        if seed is not None:
            kw["seed"] = seed
        if max_degree is not None:
            kw["max_degree"] = max_degree
        return Manifest(**kw)


def parse_rational(text: Any, where: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise RationalError(f"{where}: expected a rational string, got {text!r}")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise RationalError(f"{where}: malformed rational {text!r}") from None


def format_rational(x: Fraction) -> str:
    return str(x)


def parse_scalar(obj: Any, where: str) -> Scalar:
    if not isinstance(obj, dict):
        raise ParseError("expected an object with re/im", field=where)
    return Scalar(parse_rational(obj.get("re", "0"), f"{where}.re"),
                  parse_rational(obj.get("im", "0"), f"{where}.im"))


def scalar_json(c: Scalar) -> dict[str, str]:
    return {"re": format_rational(c.re), "im": format_rational(c.im)}


def parse_index(label: Any, n: int, where: str) -> CoframeIndex:
    if not isinstance(label, str):
        raise ParseError(f"index must be a string, got {label!r}", field=where)
    try:
        idx = CoframeIndex.parse(label)
    except ValueError:
        raise ParseError(f"malformed index {label!r}", field=where) from None
    if not 1 <= idx.k <= n:
        raise RangeError(f"{where}: index {label!r} outside 1..{n}")
    return idx


def parse_terms(terms: Any, n: int, where: str) -> Form:
    if not isinstance(terms, list):
        raise ParseError("terms must be a list", field=where)
    out = Form.zero()
    for i, t in enumerate(terms):
        w = f"{where}[{i}]"
        if not isinstance(t, dict) or "word" not in t:
            raise ParseError("term needs a word", field=w)
        if not isinstance(t["word"], list):
            raise ParseError("word must be a list of indices", field=f"{w}.word")
        idx = [parse_index(x, n, f"{w}.word") for x in t["word"]]
        out = out + Form.word(*idx, coeff=parse_scalar(t, w))
    return out


def terms_json(a: Form) -> list[dict]:
    out = []
    for m, c in sorted(a.items(), key=lambda kv: kv[0]):
        out.append({"word": [ix.label for ix in word_indices(m)], **scalar_json(c)})
    return out


def _int(obj: dict, key: str, default=None, required: bool = False) -> Any:
    if key not in obj:
        if required:
            raise ParseError("missing key", field=key)
        return default
    v = obj[key]
    if v is None and not required:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"expected an integer, got {v!r}", field=key)
    return v


def manifest_from_dict(obj: Any, name: str = "") -> Manifest:
    if not isinstance(obj, dict):
        raise ParseError("manifest must be a JSON object")
    unknown = set(obj) - set(KEYS) - {"name"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", field=sorted(unknown)[0])
    n = _int(obj, "n", required=True)
    if not 1 <= n <= 4:
        raise RangeError(f"n = {n} outside 1..4")
    dtheta = [Form.zero()] * n
    for i, entry in enumerate(obj.get("dtheta", [])):
        w = f"dtheta[{i}]"
        if not isinstance(entry, dict) or "gamma" not in entry:
            raise ParseError("entry needs gamma", field=w)
        g = parse_index(str(entry["gamma"]), n, f"{w}.gamma")
        if g.bar:
            raise RangeError(f"{w}.gamma: only holomorphic generators are specified")
        dtheta[g.k - 1] = dtheta[g.k - 1] + parse_terms(entry.get("terms", []), n, f"{w}.terms")
    for g, f in enumerate(dtheta):
        if f and f.degrees() != {2}:
            raise ParseError("dθ must be a 2-form", field=f"dtheta[gamma={g + 1}]")
    beltrami = {}
    for i, entry in enumerate(obj.get("beltrami", [])):
        w = f"beltrami[{i}]"
        if not isinstance(entry, dict) or "name" not in entry or "entries" not in entry:
            raise ParseError("entry needs name and entries", field=w)
        rows = entry["entries"]
        if not isinstance(rows, list) or len(rows) != n or any(
                not isinstance(r, list) or len(r) != n for r in rows):
            raise ParseError(f"entries must be an {n}x{n} matrix", field=f"{w}.entries")
        M = tuple(tuple(parse_scalar(x, f"{w}.entries[{r}][{c}]") for c, x in enumerate(row))
                  for r, row in enumerate(rows))
        beltrami[str(entry["name"])] = Beltrami(M, name=str(entry["name"]))
    forms = {}
    for i, entry in enumerate(obj.get("forms", [])):
        w = f"forms[{i}]"
        if not isinstance(entry, dict) or "name" not in entry:
            raise ParseError("entry needs a name", field=w)
        forms[str(entry["name"])] = parse_terms(entry.get("terms", []), n, f"{w}.terms")
    tasks = obj.get("tasks", ["all"])
    if not isinstance(tasks, list) or not all(isinstance(t, str) for t in tasks):
        raise ParseError("tasks must be a list of suite names", field="tasks")
    seed = _int(obj, "seed", 0)
    if seed is None or seed < 0 or seed >= 2 ** 64:
        raise RangeError("seed must be an unsigned 64-bit integer")
    max_degree = _int(obj, "max_degree")
    if max_degree is not None and not 0 <= max_degree <= 2 * n:
        raise RangeError(f"max_degree {max_degree} outside 0..{2 * n}")
    return Manifest(n, tuple(dtheta), beltrami, forms, tuple(tasks), seed, max_degree,
                    str(obj.get("name", name)))


def manifest_to_dict(m: Manifest) -> dict:
    out: dict[str, Any] = {}
    if m.name:
        out["name"] = m.name
    out["n"] = m.n
    out["dtheta"] = [{"gamma": str(g + 1), "terms": terms_json(f)}
                     for g, f in enumerate(m.dtheta) if f]
    out["beltrami"] = [{"name": k, "entries": [[scalar_json(x) for x in row] for row in b.entries]}
                       for k, b in m.beltrami.items()]
    out["forms"] = [{"name": k, "terms": terms_json(f)} for k, f in m.forms.items()]
    out["tasks"] = list(m.tasks)
    out["seed"] = m.seed
    out["max_degree"] = m.max_degree
    return out


def parse_manifest(path: str | Path, validate: bool = False) -> Manifest:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"{path}: not UTF-8 ({e.reason})") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e.msg}", line=e.lineno) from None
    m = manifest_from_dict(obj, name=path.stem)
    if validate:
        validate_frame(m.spec(), strict=True)
    return m


def dump_manifest(m: Manifest) -> str:
    return json.dumps(manifest_to_dict(m), indent=2, ensure_ascii=False) + "\n"


def manifest_for(spec: FrameSpec, beltrami: dict[str, Beltrami] | None = None,
                 forms: dict[str, Form] | None = None, **kw) -> Manifest:
    return Manifest(spec.n, spec.dtheta, dict(beltrami or {}), dict(forms or {}),
                    name=spec.name, **kw)
