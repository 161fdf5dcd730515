"""Sparse bigraded exterior algebra over a fixed complex coframe.

Coframe generators are ``θ^1..θ^n`` (holomorphic) and ``θ^{1̄}..θ^{n̄}``
(antiholomorphic).  A basis word is stored as a bitmask: holomorphic index
``k`` occupies bit ``k-1`` and antiholomorphic index ``k`` occupies bit
``OFFSET + k - 1``.  Increasing bit position is therefore exactly the
canonical order "holomorphic ascending, then antiholomorphic ascending", and
the bidegree of a word is a pair of popcounts.

``Form``, ``VectorField`` and ``VectorForm`` are immutable sparse maps with
zero coefficients pruned eagerly, so a vanishing residual compares equal to
the empty form.
"""
from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import IndexOutOfRange
from .scalar import ONE, ZERO, Scalar

OFFSET = 32
MAX_N = OFFSET
_LOW = (1 << OFFSET) - 1


class CoframeIndex(NamedTuple):
    """Index ``k`` (1-based) of a coframe generator; ``bar`` marks θ^{k̄}."""

    k: int
    bar: bool = False

    @property
    def pos(self) -> int:
        return self.k - 1 + (OFFSET if self.bar else 0)

    @classmethod
    def from_pos(cls, pos: int) -> CoframeIndex:
        if pos >= OFFSET:
            return cls(pos - OFFSET + 1, True)
        return cls(pos + 1, False)

    def conj(self) -> CoframeIndex:
        return CoframeIndex(self.k, not self.bar)

    @property
    def label(self) -> str:
        return f"{self.k}bar" if self.bar else str(self.k)

    @classmethod
    def parse(cls, label: str) -> CoframeIndex:
        if label.endswith("bar"):
            return cls(int(label[:-3]), True)
        return cls(int(label), False)

    def __str__(self) -> str:
        return self.label


def hol(k: int) -> CoframeIndex:
    return CoframeIndex(k, False)


def antihol(k: int) -> CoframeIndex:
    return CoframeIndex(k, True)


def all_indices(n: int) -> list[CoframeIndex]:
    return [hol(k) for k in range(1, n + 1)] + [antihol(k) for k in range(1, n + 1)]


def conj_pos(pos: int) -> int:
    return pos + OFFSET if pos < OFFSET else pos - OFFSET


# ---------------------------------------------------------------------------
# words as bitmasks


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def bidegree(mask: int) -> tuple[int, int]:
    return popcount(mask & _LOW), popcount(mask >> OFFSET)


def word_indices(mask: int) -> tuple[CoframeIndex, ...]:
    return tuple(CoframeIndex.from_pos(p) for p in bits(mask))


def wedge_sign(m1: int, m2: int) -> int:
    """Sign of θ^{m1} ∧ θ^{m2} relative to the canonical word ``m1 | m2``."""
    if m1 & m2:
        return 0
    inversions = 0
    for p in bits(m2):
        inversions += popcount(m1 >> (p + 1))
    return -1 if inversions & 1 else 1


def insert_sign(pos: int, mask: int) -> int:
    """Sign of θ^{pos} ∧ θ^{mask} relative to canonical order (0 if repeated)."""
    if mask >> pos & 1:
        return 0
    return -1 if popcount(mask & ((1 << pos) - 1)) & 1 else 1


def remove_sign(pos: int, mask: int) -> int:
    """Sign of e_pos ⌟ θ^{mask}; 0 when ``pos`` is absent."""
    if not mask >> pos & 1:
        return 0
    return -1 if popcount(mask & ((1 << pos) - 1)) & 1 else 1


def conj_mask(mask: int) -> tuple[int, int]:
    """Conjugate word and the sign of re-sorting it."""
    low, high = mask & _LOW, mask >> OFFSET
    # bars swap: the old antiholomorphic block becomes the holomorphic block
    sign = -1 if (popcount(low) * popcount(high)) & 1 else 1
    return high | (low << OFFSET), sign


def sort_word(indices: Iterable[CoframeIndex]) -> tuple[int, int]:
    """Canonical mask and permutation sign for an arbitrary index sequence."""
    mask, sign = 0, 1
    for idx in reversed(list(indices)):
        s = insert_sign(idx.pos, mask)
        if s == 0:
            return 0, 0
        sign *= s
        mask |= 1 << idx.pos
    return mask, sign


def max_k(mask: int) -> int:
    low, high = mask & _LOW, mask >> OFFSET
    return max(low.bit_length(), high.bit_length())


def basis_masks(n: int, p: int | None = None, q: int | None = None,
                max_degree: int | None = None) -> list[int]:
    """All canonical words at dimension ``n``, ordered by degree then lexicographically."""
    out = []
    ps = range(n + 1) if p is None else [p]
    qs = range(n + 1) if q is None else [q]
    for p_, q_ in product(ps, qs):
        if p_ < 0 or q_ < 0 or p_ > n or q_ > n:
            continue
        if max_degree is not None and p_ + q_ > max_degree:
            continue
        for hs in combinations(range(n), p_):
            for As in combinations(range(n), q_):
                m = 0
                for h in hs:
                    m |= 1 << h
                for a in As:
                    m |= 1 << (OFFSET + a)
                out.append(m)
    out.sort(key=lambda m: (popcount(m), word_indices(m)))
    return out


def _word_key(idx: tuple[CoframeIndex, ...]):
    return tuple((i.bar, i.k) for i in idx)


# ---------------------------------------------------------------------------
# forms


class Form:
    """Element of the complexified exterior algebra with constant coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        self._terms: dict[int, Scalar] = {}
        if terms:
            for word, c in terms.items():
                if isinstance(word, int):
                    mask, sign = word, 1
                else:
                    mask, sign = sort_word(word)
                c = Scalar.coerce(c)
                if sign == 0 or not c:
                    continue
                _acc(self._terms, mask, c if sign > 0 else -c)

    @classmethod
    def _wrap(cls, terms: dict[int, Scalar]) -> Form:
        f = object.__new__(cls)
        f._terms = terms
        return f

    @classmethod
    def zero(cls) -> Form:
        return cls._wrap({})

    @classmethod
    def constant(cls, c=1) -> Form:
        c = Scalar.coerce(c)
        return cls._wrap({0: c} if c else {})

    @classmethod
    def coframe(cls, k: int, bar: bool = False) -> Form:
        return cls._wrap({1 << CoframeIndex(k, bar).pos: ONE})

    @classmethod
    def word(cls, *indices: CoframeIndex, coeff=1) -> Form:
        return cls({tuple(indices): coeff})

    @classmethod
    def basis(cls, mask: int) -> Form:
        return cls._wrap({mask: ONE})

    # -- inspection
    @property
    def terms(self) -> dict[int, Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def words(self) -> Iterator[tuple[tuple[CoframeIndex, ...], Scalar]]:
        for m in sorted(self._terms, key=lambda m: (popcount(m), word_indices(m))):
            yield word_indices(m), self._terms[m]

    def coeff(self, *indices: CoframeIndex) -> Scalar:
        mask, sign = sort_word(indices)
        if sign == 0:
            return ZERO
        c = self._terms.get(mask, ZERO)
        return c if sign > 0 else -c

    def bidegrees(self) -> set[tuple[int, int]]:
        return {bidegree(m) for m in self._terms}

    def degrees(self) -> set[int]:
        return {popcount(m) for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def bidegree(self) -> tuple[int, int] | None:
        b = self.bidegrees()
        return next(iter(b)) if len(b) == 1 else None

    def degree(self) -> int | None:
        d = self.degrees()
        return next(iter(d)) if len(d) == 1 else None

    def max_index(self) -> int:
        return max((max_k(m) for m in self._terms), default=0)

    def check_range(self, n: int) -> None:
        if self.max_index() > n:
            raise IndexOutOfRange(f"form references an index above n={n}")

    # -- algebra
    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Form):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: Form) -> Form:
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            _acc(out, m, c)
        return Form._wrap(out)

    def __sub__(self, other: Form) -> Form:
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, c in other._terms.items():
            _acc(out, m, -c)
        return Form._wrap(out)

    def __neg__(self) -> Form:
        return Form._wrap({m: -c for m, c in self._terms.items()})

    def scale(self, c) -> Form:
        c = Scalar.coerce(c)
        if not c:
            return Form.zero()
        if c == ONE:
            return self
        return Form._wrap({m: v * c for m, v in self._terms.items()})

    def __mul__(self, c) -> Form:
        if isinstance(c, Form):
            return wedge(self, c)
        return self.scale(c)

    def __rmul__(self, c) -> Form:
        return self.scale(c)

    def __xor__(self, other: Form) -> Form:
        return wedge(self, other)

    def conjugate(self) -> Form:
        return conjugate(self)

    def project(self, p: int, q: int) -> Form:
        return project(self, p, q)

    def __repr__(self) -> str:
        return f"Form({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for idx, c in self.words():
            w = "∧".join(f"θ{i.label}" for i in idx) or "1"
            parts.append(f"{c}·{w}")
        return " + ".join(parts)


def _acc(d: dict, key, c: Scalar) -> None:
    v = d.get(key)
    if v is None:
        d[key] = c
    else:
        v = v + c
        if v:
            d[key] = v
        else:
            del d[key]


def wedge(a: Form, b: Form, n: int | None = None) -> Form:
    """Exterior product, with an optional range check against dimension ``n``."""
    if n is not None:
        a.check_range(n)
        b.check_range(n)
    out: dict[int, Scalar] = {}
    bt = b._terms
    if not bt:
        return Form.zero()
    for m1, c1 in a._terms.items():
        for m2, c2 in bt.items():
            if m1 & m2:
                continue
            s = wedge_sign(m1, m2)
            c = c1 * c2
            _acc(out, m1 | m2, c if s > 0 else -c)
    return Form._wrap(out)


def conjugate(a: Form) -> Form:
    out = {}
    for m, c in a._terms.items():
        cm, s = conj_mask(m)
        c = c.conj()
        out[cm] = c if s > 0 else -c
    return Form._wrap(out)


def project(a: Form, p: int, q: int) -> Form:
    """The (p,q)-component of ``a``."""
    return Form._wrap({m: c for m, c in a._terms.items() if bidegree(m) == (p, q)})


def homogeneous_parts(a: Form) -> dict[tuple[int, int], Form]:
    parts: dict[tuple[int, int], dict] = {}
    for m, c in a._terms.items():
        parts.setdefault(bidegree(m), {})[m] = c
    return {k: Form._wrap(v) for k, v in parts.items()}


def basis_forms(n: int, p: int | None = None, q: int | None = None,
                max_degree: int | None = None) -> list[Form]:
    return [Form.basis(m) for m in basis_masks(n, p, q, max_degree)]


def total(forms: Iterable[Form]) -> Form:
    out: dict[int, Scalar] = {}
    for f in forms:
        for m, c in f._terms.items():
            _acc(out, m, c)
    return Form._wrap(out)


# ---------------------------------------------------------------------------
# vector fields


class VectorField:
    """Invariant section ``Σ X^a e_a`` of the complexified tangent bundle."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping | None = None):
        self._coeffs: dict[int, Scalar] = {}
        if coeffs:
            for idx, c in coeffs.items():
                pos = idx if isinstance(idx, int) else idx.pos
                c = Scalar.coerce(c)
                if c:
                    _acc(self._coeffs, pos, c)

    @classmethod
    def _wrap(cls, coeffs: dict[int, Scalar]) -> VectorField:
        v = object.__new__(cls)
        v._coeffs = coeffs
        return v

    @classmethod
    def basis(cls, k: int, bar: bool = False) -> VectorField:
        return cls._wrap({CoframeIndex(k, bar).pos: ONE})

    @property
    def coefficients(self) -> dict[CoframeIndex, Scalar]:
        return {CoframeIndex.from_pos(p): c for p, c in self._coeffs.items()}

    def items(self):
        return self._coeffs.items()

    def coeff(self, idx: CoframeIndex) -> Scalar:
        return self._coeffs.get(idx.pos, ZERO)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, VectorField):
            return self._coeffs == other._coeffs
        if other == 0:
            return not self._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other: VectorField) -> VectorField:
        out = dict(self._coeffs)
        for p, c in other._coeffs.items():
            _acc(out, p, c)
        return VectorField._wrap(out)

    def __sub__(self, other: VectorField) -> VectorField:
        return self + (-other)

    def __neg__(self) -> VectorField:
        return VectorField._wrap({p: -c for p, c in self._coeffs.items()})

    def scale(self, c) -> VectorField:
        c = Scalar.coerce(c)
        if not c:
            return VectorField._wrap({})
        return VectorField._wrap({p: v * c for p, v in self._coeffs.items()})

    __rmul__ = scale
    __mul__ = scale

    def conjugate(self) -> VectorField:
        return VectorField._wrap({conj_pos(p): c.conj() for p, c in self._coeffs.items()})

    def part10(self) -> VectorField:
        return VectorField._wrap({p: c for p, c in self._coeffs.items() if p < OFFSET})

    def part01(self) -> VectorField:
        return VectorField._wrap({p: c for p, c in self._coeffs.items() if p >= OFFSET})

    def apply_J(self) -> VectorField:
        """J e_k = i e_k and J e_{k̄} = -i e_{k̄}."""
        i = Scalar(0, 1)
        return VectorField._wrap(
            {p: c * i if p < OFFSET else -(c * i) for p, c in self._coeffs.items()})

    def __repr__(self) -> str:
        if not self._coeffs:
            return "VectorField(0)"
        body = " + ".join(f"{c}·e{CoframeIndex.from_pos(p).label}"
                          for p, c in sorted(self._coeffs.items()))
        return f"VectorField({body})"


def interior(X: VectorField, a: Form) -> Form:
    """X⌟a, an anti-derivation with e_a⌟θ^b = δ^b_a."""
    out: dict[int, Scalar] = {}
    for pos, x in X._coeffs.items():
        bit = 1 << pos
        low = bit - 1
        for m, c in a._terms.items():
            if m & bit:
                v = x * c
                _acc(out, m ^ bit, -v if popcount(m & low) & 1 else v)
    return Form._wrap(out)


def interior_basis(pos: int, a: Form) -> Form:
    bit = 1 << pos
    low = bit - 1
    out = {}
    for m, c in a._terms.items():
        if m & bit:
            out[m ^ bit] = -c if popcount(m & low) & 1 else c
    return Form._wrap(out)


def pairing(a: Form, X: VectorField) -> Scalar:
    """Value of a 1-form on a vector field."""
    v = ZERO
    for pos, x in X._coeffs.items():
        c = a._terms.get(1 << pos)
        if c is not None:
            v = v + c * x
    return v


# ---------------------------------------------------------------------------
# vector-valued forms


class VectorForm:
    """Sparse sum ``Σ c · θ^word ⊗ e_v`` with constant coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        self._terms: dict[tuple[int, int], Scalar] = {}
        if terms:
            for (word, v), c in terms.items():
                if isinstance(word, int):
                    mask, sign = word, 1
                else:
                    mask, sign = sort_word(word)
                pos = v if isinstance(v, int) else v.pos
                c = Scalar.coerce(c)
                if sign == 0 or not c:
                    continue
                _acc(self._terms, (mask, pos), c if sign > 0 else -c)

    @classmethod
    def _wrap(cls, terms: dict) -> VectorForm:
        v = object.__new__(cls)
        v._terms = terms
        return v

    @classmethod
    def zero(cls) -> VectorForm:
        return cls._wrap({})

    @classmethod
    def tensor(cls, a: Form, X: VectorField) -> VectorForm:
        out: dict = {}
        for m, c in a._terms.items():
            for p, x in X._coeffs.items():
                _acc(out, (m, p), c * x)
        return cls._wrap(out)

    @classmethod
    def from_components(cls, comps: Mapping[int, Form]) -> VectorForm:
        """Build ``Σ comps[pos] ⊗ e_pos`` from a map frame-position → form."""
        out: dict = {}
        for p, f in comps.items():
            for m, c in f._terms.items():
                out[(m, p)] = c
        return cls._wrap(out)

    @classmethod
    def identity(cls, n: int) -> VectorForm:
        return cls._wrap({(1 << i.pos, i.pos): ONE for i in all_indices(n)})

    @classmethod
    def hol_identity(cls, n: int) -> VectorForm:
        return cls._wrap({(1 << (k - 1), k - 1): ONE for k in range(1, n + 1)})

    @classmethod
    def antihol_identity(cls, n: int) -> VectorForm:
        return cls._wrap({(1 << (OFFSET + k - 1), OFFSET + k - 1): ONE for k in range(1, n + 1)})

    @property
    def terms(self) -> dict[tuple[int, int], Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def component(self, v: CoframeIndex | int) -> Form:
        """The form multiplying ``e_v``."""
        pos = v if isinstance(v, int) else v.pos
        return Form._wrap({m: c for (m, p), c in self._terms.items() if p == pos})

    def components(self) -> dict[int, Form]:
        out: dict[int, dict] = {}
        for (m, p), c in self._terms.items():
            out.setdefault(p, {})[m] = c
        return {p: Form._wrap(d) for p, d in out.items()}

    def degrees(self) -> set[int]:
        return {popcount(m) for m, _ in self._terms}

    def degree(self) -> int | None:
        d = self.degrees()
        return next(iter(d)) if len(d) == 1 else None

    def types(self) -> set[tuple[int, int, str]]:
        """Set of (p, q, '10' | '01') occurring among the terms."""
        return {(*bidegree(m), "10" if p < OFFSET else "01") for m, p in self._terms}

    def restrict(self, p: int, q: int, value: str) -> VectorForm:
        hol_value = value == "10"
        return VectorForm._wrap({
            (m, v): c for (m, v), c in self._terms.items()
            if bidegree(m) == (p, q) and (v < OFFSET) == hol_value})

    def max_index(self) -> int:
        return max((max(max_k(m), (v % OFFSET) + 1) for m, v in self._terms), default=0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, VectorForm):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: VectorForm) -> VectorForm:
        out = dict(self._terms)
        for k, c in other._terms.items():
            _acc(out, k, c)
        return VectorForm._wrap(out)

    def __sub__(self, other: VectorForm) -> VectorForm:
        out = dict(self._terms)
        for k, c in other._terms.items():
            _acc(out, k, -c)
        return VectorForm._wrap(out)

    def __neg__(self) -> VectorForm:
        return VectorForm._wrap({k: -c for k, c in self._terms.items()})

    def scale(self, c) -> VectorForm:
        c = Scalar.coerce(c)
        if not c:
            return VectorForm.zero()
        return VectorForm._wrap({k: v * c for k, v in self._terms.items()})

    __rmul__ = scale
    __mul__ = scale

    def conjugate(self) -> VectorForm:
        out = {}
        for (m, p), c in self._terms.items():
            cm, s = conj_mask(m)
            c = c.conj()
            out[(cm, conj_pos(p))] = c if s > 0 else -c
        return VectorForm._wrap(out)

    def wedge_left(self, a: Form) -> VectorForm:
        """a ∧ self, acting on the form slot."""
        out: dict = {}
        for m1, c1 in a._terms.items():
            for (m2, p), c2 in self._terms.items():
                if m1 & m2:
                    continue
                s = wedge_sign(m1, m2)
                c = c1 * c2
                _acc(out, (m1 | m2, p), c if s > 0 else -c)
        return VectorForm._wrap(out)

    def __repr__(self) -> str:
        if not self._terms:
            return "VectorForm(0)"
        parts = []
        for (m, p), c in sorted(self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            w = "∧".join(f"θ{i.label}" for i in word_indices(m)) or "1"
            parts.append(f"{c}·{w}⊗e{CoframeIndex.from_pos(p).label}")
        return "VectorForm(" + " + ".join(parts) + ")"
