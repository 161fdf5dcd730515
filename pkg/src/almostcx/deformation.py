"""Beltrami differentials and the deformed structures they generate.

A Beltrami differential is stored as its coefficient matrix ``P[i][j] = φ^{i}_{j̄}``
(0-based), i.e. ``φ = Σ P[i][j] θ^{j̄} ⊗ e_i``.  Indices of 2n×2n block matrices
run over ``1..n, 1̄..n̄`` and a matrix ``M`` is identified with the endomorphism
``Σ M[α][β] θ^β ⊗ e_α``, so that ``M⌟θ^α = Σ_β M[α][β] θ^β``.  The deformed
coframe is ``θ_φ = Φ θ`` with ``Φ = [[I, P], [P̄, I]]``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .algebra import (
    OFFSET, Form, VectorField, VectorForm, _acc, bidegree, bits, homogeneous_parts,
    interior, popcount, wedge, wedge_sign,
)
from .contraction import (
    Connection, EValuedForm, Section, abc_decompose, contract, contract_vf, dbar_vector,
    exp_contraction, fn_bracket, lift, nabla_apply, nabla_part,
)
from .errors import NonBeltramiInput, SingularTransition
from .frame import FrameSpec, Part, d_component, exterior_d, validate_frame
from .scalar import ONE, ZERO, Scalar

HALF = Scalar(Fraction(1, 2))
SIXTH = Scalar(Fraction(1, 6))
ENTRY_POOL = tuple(Scalar(re, im) for re, im in [
    (0, 0), (1, 0), (-1, 0), (Fraction(1, 2), 0), (Fraction(-1, 2), 0), (2, 0), (-2, 0),
    (0, 1), (0, -1), (0, Fraction(1, 2)), (0, Fraction(-1, 2))])


def block_pos(idx: int, n: int) -> int:
    """Frame position of block index ``idx`` in 0..2n-1."""
    return idx if idx < n else OFFSET + idx - n


def endo_from_matrix(M: la.Matrix, n: int) -> VectorForm:
    out = {}
    for a, row in enumerate(M):
        for b, c in enumerate(row):
            if c:
                out[(1 << block_pos(b, n), block_pos(a, n))] = c
    return VectorForm._wrap(out)


def matrix_from_endo(E: VectorForm, n: int) -> la.Matrix:
    idx = {block_pos(i, n): i for i in range(2 * n)}
    M = [[ZERO] * (2 * n) for _ in range(2 * n)]
    for (m, p), c in E.items():
        if popcount(m) != 1:
            raise ValueError("endomorphisms are sums of 1-forms ⊗ vectors")
        M[idx[p]][idx[m.bit_length() - 1]] = c
    return la.mat(M)


@dataclass(frozen=True, eq=False)
class Beltrami:
    """φ ∈ A^{0,1}(T^{1,0}) with constant coefficients."""

    entries: la.Matrix
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        E = la.mat(self.entries)
        if any(len(r) != len(E) for r in E):
            raise ValueError("Beltrami matrix must be square")
        object.__setattr__(self, "entries", E)

    @classmethod
    def zero(cls, n: int) -> Beltrami:
        return cls(la.zeros(n), name="zero")

    @classmethod
    def from_vector_form(cls, phi: VectorForm, n: int, name: str = "") -> Beltrami:
        M = [[ZERO] * n for _ in range(n)]
        for (m, p), c in phi.items():
            if bidegree(m) != (0, 1) or p >= OFFSET:
                raise NonBeltramiInput("term outside A^{0,1}(T^{1,0})")
            j = m.bit_length() - 1 - OFFSET
            M[p][j] = c
        return cls(la.mat(M), name=name)

    @classmethod
    def random(cls, n: int, rng: random.Random, density: float = 1.0,
               name: str = "") -> Beltrami:
        rows = []
        for _ in range(n):
            rows.append([rng.choice(ENTRY_POOL[1:]) if rng.random() < density else ZERO
                         for _ in range(n)])
        return cls(la.mat(rows), name=name)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def conj_entries(self) -> la.Matrix:
        """Matrix of φ̄ with rows indexed by ī and columns by j."""
        return la.conj(self.entries)

    @property
    def vector_form(self) -> VectorForm:
        hit = self._cache.get("vf")
        if hit is not None:
            return hit
        out = {}
        for i, row in enumerate(self.entries):
            for j, c in enumerate(row):
                if c:
                    out[(1 << (OFFSET + j), i)] = c
        hit = self._cache["vf"] = VectorForm._wrap(out)
        return hit

    @property
    def conj_vector_form(self) -> VectorForm:
        return self.vector_form.conjugate()

    def scale(self, c) -> Beltrami:
        c = Scalar.coerce(c)
        return Beltrami(tuple(tuple(x * c for x in r) for r in self.entries), self.name)

    def __neg__(self) -> Beltrami:
        return Beltrami(la.neg(self.entries), self.name)

    def __repr__(self) -> str:
        rows = "; ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"Beltrami({self.name or ''}[{rows}])"


def random_beltramis(n: int, count: int, seed: int, density: float = 1.0) -> list[Beltrami]:
    """Seeded Beltrami matrices, rejecting singular transitions and repeats of zero."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        phi = Beltrami.random(n, rng, density, name=f"rand{len(out)}")
        if la.is_zero(phi.entries):
            continue
        try:
            build_transition(phi)
        except SingularTransition:
            continue
        out.append(phi)
    return out


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    Phi: la.Matrix
    PhiInv: la.Matrix
    A_inv: la.Matrix      # (I' - φ φ̄)^{-1}
    B_inv: la.Matrix      # (I'' - φ̄ φ)^{-1}
    det: Scalar

    @property
    def n(self) -> int:
        return len(self.A_inv)


def build_transition(phi: Beltrami) -> TransitionMatrix:
    n = phi.n
    P, Pb = phi.entries, phi.conj_entries
    I = la.identity(n)
    A = la.sub(I, la.matmul(P, Pb))
    det = la.det(A)
    if not det:
        raise SingularTransition(f"det(I' - φφ̄) = 0 for {phi!r}")
    A_inv = la.inverse(A)
    B_inv = la.inverse(la.sub(I, la.matmul(Pb, P)))
    Phi = la.block(I, P, Pb, I)
    PhiInv = la.block(A_inv, la.neg(la.matmul(P, B_inv)),
                      la.neg(la.matmul(Pb, A_inv)), B_inv)
    return TransitionMatrix(Phi, PhiInv, A_inv, B_inv, det)


# ---------------------------------------------------------------------------
# simultaneous contraction


def finv_apply(endo: VectorForm, a: Form) -> Form:
    """Apply ``endo⌟`` to every coframe factor of every monomial and wedge the results."""
    return _finv_images(_endo_images(endo), a)


def _endo_images(endo: VectorForm) -> dict[int, Form]:
    images: dict[int, dict] = {}
    for (m, p), c in endo.items():
        if popcount(m) != 1:
            raise ValueError("simultaneous contraction needs an endomorphism-valued 1-form")
        images.setdefault(p, {})[m] = c
    return {p: Form._wrap(t) for p, t in images.items()}


class FinvMap:
    """Simultaneous contraction by a fixed endomorphism, memoized per word."""

    def __init__(self, images: dict[int, Form]):
        self.images = images
        self._words: dict[int, Form] = {0: Form.constant(1)}

    @classmethod
    def of_matrix(cls, M: la.Matrix, n: int) -> FinvMap:
        return cls(_endo_images(endo_from_matrix(M, n)))

    def __call__(self, a: Form) -> Form:
        return _finv_images(self.images, a, self._words)


def _finv_images(images: dict[int, Form], a: Form, cache: dict | None = None) -> Form:
    if cache is None:
        cache = {0: Form.constant(1)}
    out: dict = {}
    for m, c in a.items():
        img = _finv_word(images, m, cache)
        for w, v in img.items():
            _acc(out, w, c * v)
    return Form._wrap(out)


def _finv_word(images, mask, cache) -> Form:
    hit = cache.get(mask)
    if hit is not None:
        return hit
    top = mask.bit_length() - 1
    rest = mask ^ (1 << top)
    head = _finv_word(images, rest, cache)
    img = images.get(top)
    out = wedge(head, img) if img is not None else Form.zero()
    cache[mask] = out
    return out


def matrix_finv(M: la.Matrix, n: int, a: Form) -> Form:
    return finv_apply(endo_from_matrix(M, n), a)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DeformedStructure:
    base: FrameSpec
    phi: Beltrami
    transition: TransitionMatrix
    coframe_phi: tuple[Form, ...]
    frame_phi: tuple[VectorField, ...]
    spec_phi: FrameSpec
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.base.n

    def _map(self, key, build):
        m = self._cache.get(key)
        if m is None:
            m = self._cache[key] = build()
        return m

    def E(self, a: Form) -> Form:
        """e^{i_φ|i_φ̄} via the transition matrix."""
        return self._map("E", lambda: FinvMap.of_matrix(self.transition.Phi, self.n))(a)

    def E_inv(self, a: Form) -> Form:
        return self._map("Einv", lambda: FinvMap.of_matrix(self.transition.PhiInv, self.n))(a)

    def O1(self, a: Form) -> Form:
        return self._map("O1", lambda: FinvMap.of_matrix(o1_matrix(self.transition), self.n))(a)

    def O3(self, a: Form) -> Form:
        return self._map("O3", lambda: FinvMap.of_matrix(o3_matrix(self.phi), self.n))(a)

    def native_part(self, a: Form, part: Part) -> Form:
        """Component of d on ``a`` (base coordinates) with respect to J_φ."""
        return self.E(d_component(self.spec_phi, self.E_inv(a), part))


def deform_structure(spec: FrameSpec, phi: Beltrami) -> DeformedStructure:
    n = spec.n
    if phi.n != n:
        raise ValueError(f"Beltrami of size {phi.n} on a frame of dimension {n}")
    T = build_transition(phi)
    coframe = tuple(
        Form._wrap({1 << block_pos(b, n): c for b, c in enumerate(T.Phi[a]) if c})
        for a in range(2 * n))
    frame = tuple(
        VectorField._wrap({block_pos(m, n): T.PhiInv[m][a] for m in range(2 * n)
                           if T.PhiInv[m][a]})
        for a in range(2 * n))
    E = lambda x: matrix_finv(T.Phi, n, x)
    E_inv = lambda x: matrix_finv(T.PhiInv, n, x)
    dtheta = tuple(E_inv(exterior_d(spec, E(Form.coframe(g)))) for g in range(1, n + 1))
    spec_phi = FrameSpec(n, dtheta, name=f"{spec.name}|{phi.name}")
    return DeformedStructure(spec, phi, T, coframe, frame, spec_phi)


def exp_pair(ds: DeformedStructure, a: Form) -> Form:
    """Replace each θ^i by θ^i + φ⌟θ^i and each θ^{ī} by θ^{ī} + φ̄⌟θ^{ī}."""
    phi, phib = ds.phi.vector_form, ds.phi.conj_vector_form
    images = {}
    for k in range(1, ds.n + 1):
        t, tb = Form.coframe(k), Form.coframe(k, True)
        images[k - 1] = t + contract(phi, t)
        images[OFFSET + k - 1] = tb + contract(phib, tb)
    return _finv_images(images, a)


def exp_pair_inverse(ds: DeformedStructure, a: Form) -> Form:
    return ds.E_inv(a)


# ---------------------------------------------------------------------------
# Maurer–Cartan


def bracket_terms(spec: FrameSpec, phi: Beltrami):
    """[φ,φ], its A/B/C split and the cubic correction i_{[φ,φ]}φ - i_φ[φ,φ]."""
    hit = phi._cache.get(spec)
    if hit is None:
        v = phi.vector_form
        br = fn_bracket(spec, v, v)
        A, B, C = abc_decompose(br)
        cubic = contract_vf(br, v) - contract_vf(v, br)
        hit = phi._cache[spec] = (br, (A, B, C), cubic)
    return hit


def maurer_cartan(spec: FrameSpec, phi: Beltrami) -> VectorForm:
    """MC(φ) = ∂̄φ - ½A(φ,φ) - (1/6)(i_{[φ,φ]}φ - i_φ[φ,φ])."""
    key = ("mc", spec)
    hit = phi._cache.get(key)
    if hit is None:
        _, (A, _, _), cubic = bracket_terms(spec, phi)
        hit = dbar_vector(spec, phi.vector_form) - A.scale(HALF) - cubic.scale(SIXTH)
        phi._cache[key] = hit
    return hit


def conjugated_d(spec: FrameSpec, phi: Beltrami, a: Form) -> Form:
    """e^{-i_φ} d e^{i_φ} a."""
    v = phi.vector_form
    return exp_contraction(-v, exterior_d(spec, exp_contraction(v, a)))


def _commutator(spec, part, v, a):
    """[P, i_φ] a = P i_φ a - i_φ P a for a type component P of d."""
    return d_component(spec, contract(v, a), part) - contract(v, d_component(spec, a, part))


def maurer_cartan_extracted(spec: FrameSpec, phi: Beltrami) -> tuple[VectorForm, VectorForm]:
    """MC read off from e^{-i_φ} d e^{i_φ} - d - [μ,i_φ] - [∂,i_φ] + ½ i_{B+C}.

    Returns the T^{1,0}-valued result and the T^{0,1} leftover (expected 0).
    """
    v = phi.vector_form
    _, (_, B, C), _ = bracket_terms(spec, phi)
    BC = (B + C).scale(HALF)

    def op(a):
        return (conjugated_d(spec, phi, a) - exterior_d(spec, a)
                - _commutator(spec, Part.MU, v, a) - _commutator(spec, Part.DEL, v, a)
                + contract(BC, a))

    hol_part, antihol_part = {}, {}
    for k in range(spec.n):
        hol_part[k] = op(Form.basis(1 << k))
        antihol_part[OFFSET + k] = op(Form.basis(1 << (OFFSET + k)))
    return VectorForm.from_components(hol_part), VectorForm.from_components(antihol_part)


# ---------------------------------------------------------------------------
# extension formulas


def _exp(v: VectorForm, s: Section) -> Section:
    return lift(lambda f: exp_contraction(v, f), s)


def _i(rho: VectorForm, s: Section) -> Section:
    return lift(lambda f: contract(rho, f), s)


def extension_residual(conn: Connection, phi: Beltrami, s: Section) -> Section:
    """e^{-i_φ}∇e^{i_φ}s - (∇ - L^∇_φ - i_{½[φ,φ]} - i_{(1/6)(i_{[φ,φ]}φ - i_φ[φ,φ])})s."""
    v = phi.vector_form
    br, _, cubic = bracket_terms(conn.spec, phi)
    nab = lambda x: nabla_apply(conn, x)
    lhs = _exp(-v, nab(_exp(v, s)))
    lie = _i(v, nab(s)) - nab(_i(v, s))
    rhs = nab(s) - lie - _i(br.scale(HALF), s) - _i(cubic.scale(SIXTH), s)
    return lhs - rhs


def power_commutator_residual(conn: Connection, phi: Beltrami, k: int, s: Section) -> Section:
    """[∇, i_φ^k]s minus k i^{k-1}[∇,i_φ] - C(k,2) i^{k-2} i_{[φ,φ]} - C(k,3) i^{k-3} i_{cubic}."""
    if k < 1:
        raise ValueError("k must be at least 1")
    v = phi.vector_form
    br, _, cubic = bracket_terms(conn.spec, phi)
    nab = lambda x: nabla_apply(conn, x)

    def ipow(j, x):
        for _ in range(j):
            x = _i(v, x)
        return x

    lhs = nab(ipow(k, s)) - ipow(k, nab(s))
    comm = nab(_i(v, s)) - _i(v, nab(s))
    rhs = ipow(k - 1, comm).scale(k)
    if k >= 2:
        rhs = rhs - ipow(k - 2, _i(br, s)).scale(Fraction(k * (k - 1), 2))
    if k >= 3:
        rhs = rhs - ipow(k - 3, _i(cubic, s)).scale(Fraction(k * (k - 1) * (k - 2), 6))
    return lhs - rhs


def decomposed_extension_residual(spec: FrameSpec, phi: Beltrami, part: Part, a: Section,
                                  conn: Connection | None = None) -> Section:
    """e^{-i_φ} P e^{i_φ} - (P - L^P_φ - correction) for one type component P of ∇."""
    if conn is None:
        conn = Connection.trivial(spec, 1 if isinstance(a, Form) else a.rank)
    v = phi.vector_form
    _, (A, B, C), _ = bracket_terms(spec, phi)
    P = lambda x: nabla_part(conn, x, part)
    lhs = _exp(-v, P(_exp(v, a)))
    rhs = P(a) - (_i(v, P(a)) - P(_i(v, a)))
    if part is Part.MU:
        cubic = contract_vf(C, v) - contract_vf(v, B)
        rhs = rhs - _i((B + C).scale(HALF), a) - _i(cubic.scale(SIXTH), a)
    elif part is Part.DEL:
        rhs = rhs - _i(A.scale(HALF), a)
    return lhs - rhs


def commutators_with_parts(spec: FrameSpec, phi: Beltrami, a: Form) -> dict[str, Form]:
    """Residuals of [∂̄, i_φ] = i_{∂̄φ} and [μ̄, i_φ] = 0."""
    v = phi.vector_form
    return {
        "dbar": _commutator(spec, Part.DELBAR, v, a) - contract(dbar_vector(spec, v), a),
        "mubar": _commutator(spec, Part.MUBAR, v, a),
    }


def o2_apply(spec: FrameSpec, phi: Beltrami, a: Form, mc: VectorForm | None = None) -> Form:
    """(d + [μ,i_φ] + [∂,i_φ] - i_{½(B+C)} + i_{MC}) a."""
    v = phi.vector_form
    _, (_, B, C), _ = bracket_terms(spec, phi)
    if mc is None:
        mc = maurer_cartan(spec, phi)
    return (exterior_d(spec, a) + _commutator(spec, Part.MU, v, a)
            + _commutator(spec, Part.DEL, v, a) - contract((B + C).scale(HALF), a)
            + contract(mc, a))


def conjugated_d_residual(spec: FrameSpec, phi: Beltrami, a: Form) -> Form:
    return conjugated_d(spec, phi, a) - o2_apply(spec, phi, a)


# ---------------------------------------------------------------------------
# the O-chain


def o1_matrix(T: TransitionMatrix) -> la.Matrix:
    """I' + (I''-φ̄φ)^{-1} - φ̄(I'-φφ̄)^{-1}."""
    n = T.n
    lower_left = tuple(r[:n] for r in T.PhiInv[n:])
    return la.block(la.identity(n), la.zeros(n), lower_left, T.B_inv)


def o3_matrix(phi: Beltrami) -> la.Matrix:
    """I - φ̄φ + φ̄."""
    n = phi.n
    P, Pb = phi.entries, phi.conj_entries
    return la.block(la.identity(n), la.zeros(n), Pb, la.sub(la.identity(n), la.matmul(Pb, P)))


def o_chain(ds: DeformedStructure, a: Form) -> Form:
    """O₁Finv ∘ O₂ ∘ O₃Finv, evaluated and memoized word by word."""
    words = ds._map("ochain", dict)
    mc = maurer_cartan(ds.base, ds.phi)
    out: dict = {}
    for m, c in a.items():
        img = words.get(m)
        if img is None:
            w = Form.basis(m)
            img = words[m] = ds.O1(o2_apply(ds.base, ds.phi, ds.O3(w), mc))
        for w, v in img.items():
            _acc(out, w, c * v)
    return Form._wrap(out)


def o_chain_part(ds: DeformedStructure, a: Form, part: Part) -> Form:
    s, t = part.shift
    out = Form.zero()
    for (p, q), piece in homogeneous_parts(a).items():
        out = out + o_chain(ds, piece).project(p + s, q + t)
    return out


def o_chain_residual(ds: DeformedStructure, a: Form) -> Form:
    return exterior_d(ds.base, exp_pair(ds, a)) - exp_pair(ds, o_chain(ds, a))


def o_chain_part_residual(ds: DeformedStructure, a: Form, part: Part) -> Form:
    return ds.native_part(exp_pair(ds, a), part) - exp_pair(ds, o_chain_part(ds, a, part))


# ---------------------------------------------------------------------------


def compatibility_antisymmetry(phi: Beltrami) -> bool:
    """True iff φ = -φ^T; then det(I' - φφ̄) = det(I' + φφ*) is real and positive."""
    P = phi.entries
    if P != la.neg(la.transpose(P)):
        return False
    n = phi.n
    lhs = la.det(la.sub(la.identity(n), la.matmul(P, phi.conj_entries)))
    rhs = la.det(la.add(la.identity(n), la.matmul(P, la.adjoint(P))))
    if lhs != rhs or not rhs.is_real() or rhs.re <= 0:
        raise AssertionError("antisymmetric φ must give det(I' + φφ*) > 0")
    return True


# ---------------------------------------------------------------------------
# extended exponential operator: identities


def block_identity_residuals(T: TransitionMatrix, phi: Beltrami) -> dict[str, la.Matrix]:
    """Residuals of the inverse-block relations and of Φ·Φ⁻¹ = Φ⁻¹·Φ = I."""
    n = phi.n
    P, Pb = phi.entries, phi.conj_entries
    I = la.identity(n)
    mm = la.matmul
    return {
        "Phi*PhiInv": la.sub(mm(T.Phi, T.PhiInv), la.identity(2 * n)),
        "PhiInv*Phi": la.sub(mm(T.PhiInv, T.Phi), la.identity(2 * n)),
        "Ainv*phi = phi*Binv": la.sub(mm(T.A_inv, P), mm(P, T.B_inv)),
        "Ainv - phi*Binv*phibar = I": la.sub(la.sub(T.A_inv, mm(mm(P, T.B_inv), Pb)), I),
        "Binv*phibar = phibar*Ainv": la.sub(mm(T.B_inv, Pb), mm(Pb, T.A_inv)),
        "Binv - phibar*Ainv*phi = I": la.sub(la.sub(T.B_inv, mm(mm(Pb, T.A_inv), P)), I),
    }


def duality_residual(ds: DeformedStructure) -> la.Matrix:
    """θ^α_φ(e_{φ,β}) - δ^α_β."""
    n2 = 2 * ds.n
    rows = []
    for a in range(n2):
        row = []
        for b in range(n2):
            v = interior(ds.frame_phi[b], ds.coframe_phi[a]).terms.get(0, ZERO)
            row.append(v - (ONE if a == b else ZERO))
        rows.append(tuple(row))
    return tuple(rows)


def identity_plus_phi(phi: Beltrami) -> VectorForm:
    return VectorForm.identity(phi.n) + phi.vector_form + phi.conj_vector_form


def generator_residuals(ds: DeformedStructure) -> dict[str, Form]:
    """Per-generator identities for e^{i_φ} against the O₃ and O₁ contractions.

    For every θ^k and θ^{k̄}:
      e^{i_φ}((I - φ̄φ + φ̄)⌟θ) = (I + φ + φ̄)⌟θ,
      e^{i_φ}(θ^k) = (I + φ)⌟θ^k,
      e^{i_φ|i_φ̄}(O₁⌟θ^{k̄}) = θ^{k̄}.
    """
    v = ds.phi.vector_form
    full = identity_plus_phi(ds.phi)
    hol_plus = VectorForm.identity(ds.n) + v
    out = {}
    for g in range(2 * ds.n):
        t = Form.basis(1 << block_pos(g, ds.n))
        lab = f"{g + 1}" if g < ds.n else f"{g + 1 - ds.n}bar"
        out[f"exp(O3 theta^{lab})"] = exp_contraction(v, ds.O3(t)) - contract(full, t)
        if g < ds.n:
            out[f"exp(theta^{lab})"] = exp_contraction(v, t) - contract(hol_plus, t)
        else:
            out[f"exp_pair(O1 theta^{lab})"] = exp_pair(ds, ds.O1(t)) - t
    return out


def composition_residuals(ds: DeformedStructure, a: Form) -> dict[str, Form]:
    """Both factorizations of e^{i_φ|i_φ̄} through e^{i_φ}, plus the explicit inverse."""
    v = ds.phi.vector_form
    return {
        "exp(-phi) exp_pair = O3 Finv": exp_contraction(-v, exp_pair(ds, a)) - ds.O3(a),
        "exp_pair^-1 exp(phi) = O1 Finv": ds.E_inv(exp_contraction(v, a)) - ds.O1(a),
        "exp_pair^-1 exp_pair = id": ds.E_inv(exp_pair(ds, a)) - a,
        "exp_pair exp_pair^-1 = id": exp_pair(ds, ds.E_inv(a)) - a,
        "exp_pair = (I+phi+phibar) Finv": exp_pair(ds, a) - finv_apply(identity_plus_phi(ds.phi), a),
    }


def deformed_identity(ds: DeformedStructure, bar: bool = False) -> VectorForm:
    """Σ_k θ^k_φ ⊗ e_{φ,k} (or its antiholomorphic analogue) in base coordinates."""
    n = ds.n
    out = VectorForm.zero()
    for k in range(n):
        g = k + n if bar else k
        out = out + VectorForm.tensor(ds.coframe_phi[g], ds.frame_phi[g])
    return out


def type_residual(ds: DeformedStructure, a: Form) -> Form:
    """For homogeneous a of bidegree (p,q): I'_φ⌟e^{i_φ|i_φ̄}(a) - p·e^{i_φ|i_φ̄}(a).

    I'_φ counts J_φ-holomorphic factors, so zero means the image has J_φ-type (p, ·);
    the total degree is preserved, so the J_φ-bidegree is (p,q).
    """
    p, _ = a.bidegree()
    img = exp_pair(ds, a)
    return contract(deformed_identity(ds), img) - img.scale(p)


def real_operator_residual(ds: DeformedStructure, a: Form) -> Form:
    return exp_pair(ds, a).conjugate() - exp_pair(ds, a.conjugate())


def finv_additivity_witness(n: int) -> tuple[Form, Form]:
    """((I'+I'')Finv α, I'Finv α + I''Finv α) for α = θ¹∧θ¹̄; these differ."""
    alpha = Form.coframe(1) ^ Form.coframe(1, True)
    hol_id, anti_id = VectorForm.hol_identity(n), VectorForm.antihol_identity(n)
    return (finv_apply(hol_id + anti_id, alpha),
            finv_apply(hol_id, alpha) + finv_apply(anti_id, alpha))


def frame_expression(ds: DeformedStructure, M: la.Matrix) -> VectorForm:
    """Σ M^α_β θ^β_φ ⊗ e_{φ,α}, rewritten in the base frame."""
    out = VectorForm.zero()
    for a, row in enumerate(M):
        for b, c in enumerate(row):
            if c:
                out = out + VectorForm.tensor(ds.coframe_phi[b].scale(c), ds.frame_phi[a])
    return out


def basis_independence_residuals(ds: DeformedStructure) -> dict[str, VectorForm]:
    """Φ and Φ⁻¹ as contraction operators agree whether written in θ or in θ_φ."""
    n, T = ds.n, ds.transition
    return {name: frame_expression(ds, M) - endo_from_matrix(M, n)
            for name, M in (("PhiInv", T.PhiInv), ("Phi", T.Phi))}


def _antihol_endo(M: la.Matrix, n: int, from_bar: bool, to_bar: bool) -> VectorForm:
    """n×n block acting θ^{row} ↦ Σ M[row][col] θ^{col} between the chosen halves."""
    out = {}
    for r, row in enumerate(M):
        for c, x in enumerate(row):
            if x:
                out[(1 << ((OFFSET if to_bar else 0) + c), (OFFSET if from_bar else 0) + r)] = x
    return VectorForm._wrap(out)


def conjugated_block_residual(ds: DeformedStructure) -> dict[str, Form]:
    """(I''-φ̄φ)^{-1}φ̄ ⌟ ((I''-φ̄φ)⌟θ^{ī}) - φ̄⌟θ^{ī} for each i."""
    n, phi = ds.n, ds.phi
    P, Pb = phi.entries, phi.conj_entries
    B = la.sub(la.identity(n), la.matmul(Pb, P))
    outer = _antihol_endo(la.matmul(ds.transition.B_inv, Pb), n, True, False)
    inner = _antihol_endo(B, n, True, True)
    phib = phi.conj_vector_form
    out = {}
    for i in range(1, n + 1):
        t = Form.coframe(i, True)
        out[f"theta^{i}bar"] = contract(outer, contract(inner, t)) - contract(phib, t)
    return out
