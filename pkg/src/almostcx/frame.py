"""Invariant frames given by structure data ``dθ^γ``.

The exterior differential is the unique graded derivation with the prescribed
values on the coframe and ``d(const) = 0``; on a basis word it is
``d θ^w = Σ_a dθ^a ∧ (e_a ⌟ θ^w)``.  Brackets of frame vectors are derived
from the determinant-convention evaluation ``[e_a, e_b] = -Σ_γ dθ^γ(e_a, e_b) e_γ``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .algebra import (
    OFFSET, Form, VectorField, VectorForm, _acc, all_indices, basis_masks, bidegree,
    bits, conjugate, homogeneous_parts, interior, interior_basis, project, remove_sign,
    wedge_sign,
)
from .errors import IndexOutOfRange, InvalidFrame
from .scalar import Scalar


class Part(Enum):
    """Type components of d with their bidegree shifts."""

    MU = (2, -1)
    DEL = (1, 0)
    DELBAR = (0, 1)
    MUBAR = (-1, 2)

    @property
    def shift(self) -> tuple[int, int]:
        return self.value


@dataclass(frozen=True, eq=False)
class FrameSpec:
    """Complex dimension ``n`` and the values ``dθ^1..dθ^n``."""

    n: int
    dtheta: tuple[Form, ...]
    name: str = ""
    _dcache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        dt = tuple(self.dtheta)
        if len(dt) < self.n:
            dt = dt + (Form.zero(),) * (self.n - len(dt))
        if len(dt) != self.n:
            raise InvalidFrame(f"expected {self.n} structure forms, got {len(dt)}")
        for g, f in enumerate(dt, 1):
            f.check_range(self.n)
            if f and f.degrees() != {2}:
                raise InvalidFrame(f"dθ^{g} must be a 2-form", residual=f, gamma=g)
        object.__setattr__(self, "dtheta", dt)

    @classmethod
    def abelian(cls, n: int, name: str = "") -> FrameSpec:
        return cls(n, (Form.zero(),) * n, name=name or f"abelian{n}")

    def d_generator(self, pos: int) -> Form:
        key = ("gen", pos)
        out = self._dcache.get(key)
        if out is None:
            if pos < OFFSET:
                out = self.dtheta[pos]
            else:
                out = conjugate(self.dtheta[pos - OFFSET])
            self._dcache[key] = out
        return out

    def d_word(self, mask: int) -> Form:
        out = self._dcache.get(mask)
        if out is not None:
            return out
        terms: dict = {}
        for p in bits(mask):
            dg = self.d_generator(p)
            if not dg:
                continue
            rest = mask ^ (1 << p)
            s = remove_sign(p, mask)
            for m, c in dg.items():
                if m & rest:
                    continue
                sign = s * wedge_sign(m, rest)
                _acc(terms, m | rest, c if sign > 0 else -c)
        out = Form._wrap(terms)
        self._dcache[mask] = out
        return out

    def bracket_basis(self, a: int, b: int) -> VectorField:
        """[e_a, e_b] for frame positions a, b."""
        key = ("br", a, b)
        out = self._dcache.get(key)
        if out is None:
            coeffs = {}
            for g in all_indices(self.n):
                val = interior_basis(b, interior_basis(a, self.d_generator(g.pos)))
                c = val.terms.get(0)
                if c:
                    coeffs[g.pos] = -c
            out = VectorField._wrap(coeffs)
            self._dcache[key] = out
        return out

    def positions(self) -> list[int]:
        return [i.pos for i in all_indices(self.n)]

    def is_integrable(self) -> bool:
        return all(not project(f, 0, 2) for f in self.dtheta)

    def __repr__(self) -> str:
        return f"FrameSpec(n={self.n}, name={self.name!r})"


# ---------------------------------------------------------------------------


def exterior_d(spec: FrameSpec, a: Form) -> Form:
    out: dict = {}
    for m, c in a.items():
        for m2, c2 in spec.d_word(m).items():
            _acc(out, m2, c * c2)
    return Form._wrap(out)


def d_component(spec: FrameSpec, a: Form, part: Part) -> Form:
    """Projection of d onto the bidegree shift of ``part``, per homogeneous piece."""
    s, t = part.shift
    out: dict = {}
    for (p, q), piece in homogeneous_parts(a).items():
        for m, c in exterior_d(spec, piece).items():
            if bidegree(m) == (p + s, q + t):
                _acc(out, m, c)
    return Form._wrap(out)


def mu(spec, a):
    return d_component(spec, a, Part.MU)


def delta(spec, a):
    return d_component(spec, a, Part.DEL)


def delta_bar(spec, a):
    return d_component(spec, a, Part.DELBAR)


def mu_bar(spec, a):
    return d_component(spec, a, Part.MUBAR)


def vector_bracket(spec: FrameSpec, X: VectorField, Y: VectorField) -> VectorField:
    out: dict = {}
    for a, x in X.items():
        for b, y in Y.items():
            for g, c in spec.bracket_basis(a, b).items():
                _acc(out, g, x * y * c)
    return VectorField._wrap(out)


def lie_derivative_form(spec: FrameSpec, X: VectorField, a: Form) -> Form:
    """Cartan formula L_X = X⌟d + d X⌟."""
    return interior(X, exterior_d(spec, a)) + exterior_d(spec, interior(X, a))


def nijenhuis_pair(spec: FrameSpec, X: VectorField, Y: VectorField) -> VectorField:
    """N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]."""
    JX, JY = X.apply_J(), Y.apply_J()
    br = lambda u, v: vector_bracket(spec, u, v)
    return br(JX, JY) - br(JX, Y).apply_J() - br(X, JY).apply_J() - br(X, Y)


def nijenhuis(spec: FrameSpec) -> VectorForm:
    """N as the vector-valued 2-form Σ_{a<b} θ^a∧θ^b ⊗ N(e_a, e_b)."""
    pos = spec.positions()
    out: dict = {}
    for i, a in enumerate(pos):
        for b in pos[i + 1:]:
            N = nijenhuis_pair(spec, VectorField._wrap({a: Scalar(1)}),
                               VectorField._wrap({b: Scalar(1)}))
            for g, c in N.items():
                out[((1 << a) | (1 << b), g)] = c
    return VectorForm._wrap(out)


@dataclass(frozen=True)
class ValidationReport:
    residuals: dict
    conjugation_ok: bool

    @property
    def passed(self) -> bool:
        return self.conjugation_ok and not any(self.residuals.values())

    def first_failure(self):
        for k, v in self.residuals.items():
            if v:
                return k, v
        return None


def validate_frame(spec: FrameSpec, strict: bool = False) -> ValidationReport:
    """Check d²θ^γ = 0 for every γ and closure of the conjugate table."""
    residuals = {}
    for g in range(1, spec.n + 1):
        residuals[f"d(dθ^{g})"] = exterior_d(spec, spec.dtheta[g - 1])
    conj_ok = all(
        conjugate(spec.d_generator(OFFSET + g)) == spec.dtheta[g] for g in range(spec.n))
    report = ValidationReport(residuals, conj_ok)
    if strict and not report.passed:
        bad = report.first_failure()
        if bad is None:
            raise InvalidFrame("conjugation closure failed")
        gamma = list(report.residuals).index(bad[0]) + 1
        raise InvalidFrame(f"{bad[0]} = {bad[1]} != 0", residual=bad[1], gamma=gamma)
    return report


def check_form(spec: FrameSpec, a: Form) -> None:
    if a.max_index() > spec.n:
        raise IndexOutOfRange(f"form references an index above n={spec.n}")


SPLIT_IDENTITIES = (
    "mu^2",
    "mu del + del mu",
    "mu delbar + delbar mu + del^2",
    "mu mubar + del delbar + delbar del + mubar mu",
    "mubar del + del mubar + delbar^2",
    "mubar delbar + delbar mubar",
    "mubar^2",
)


def d_squared_split(spec: FrameSpec, a: Form) -> dict[str, Form]:
    """The seven bidegree pieces of d² = 0 applied to ``a``."""
    M, D, Db, Mb = (lambda x, P=P: d_component(spec, x, P) for P in Part)
    return {
        "mu^2": M(M(a)),
        "mu del + del mu": M(D(a)) + D(M(a)),
        "mu delbar + delbar mu + del^2": M(Db(a)) + Db(M(a)) + D(D(a)),
        "mu mubar + del delbar + delbar del + mubar mu":
            M(Mb(a)) + D(Db(a)) + Db(D(a)) + Mb(M(a)),
        "mubar del + del mubar + delbar^2": Mb(D(a)) + D(Mb(a)) + Db(Db(a)),
        "mubar delbar + delbar mubar": Mb(Db(a)) + Db(Mb(a)),
        "mubar^2": Mb(Mb(a)),
    }


def basis_sweep(spec: FrameSpec, max_degree: int | None = None) -> list[Form]:
    return [Form.basis(m) for m in basis_masks(spec.n, max_degree=max_degree)]
