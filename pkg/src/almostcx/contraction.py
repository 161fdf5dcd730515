"""Contractions, the Frölicher–Nijenhuis bracket and connections.

For ``ρ = η ⊗ X`` the contraction is ``ρ⌟α = η ∧ (X⌟α)``, extended bilinearly.
``i_ρ`` then has degree ``|ρ| - 1``; for ``|ρ| = 1`` it is an even derivation,
so ``e^{i_φ}`` is an algebra automorphism.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import factorial
from typing import Callable, Sequence, Union

from .algebra import (
    OFFSET, Form, VectorField, VectorForm, _acc, basis_masks, bidegree, bits, interior,
    popcount, project, wedge, wedge_sign,
)
from .errors import NonBeltramiInput, RankMismatch, TypeLeak
from .frame import FrameSpec, Part, d_component, exterior_d, lie_derivative_form
from .scalar import ONE, ZERO, Scalar

__all__ = [
    "interior", "contract", "contract_vf", "contract_general", "evaluate",
    "exp_contraction", "fn_bracket", "fn_bracket_collected", "fn_bracket_three_term",
    "abc_decompose", "abc_formula", "dbar_vector", "Connection", "EValuedForm",
    "nabla_apply", "nabla_part", "gen_lie", "anticommutation_residual",
    "is_beltrami_type", "gen_lie_op", "lift", "Section", "abc_commutator_residuals",
    "bracket_commutator_residuals", "nested_commutator_residual", "lie_commutator",
    "lie_commutator_residual", "beltrami_lie_commutator_residual",
    "decomposable_lie_residual", "split_bracket_residuals", "tian_todorov_residuals",
]


def contract(rho: VectorForm, a: Form) -> Form:
    """ρ⌟a = Σ η ∧ (e_v ⌟ a) over the terms η⊗e_v of ρ."""
    out: dict = {}
    at = a._terms
    for (m1, v), c1 in rho._terms.items():
        bit = 1 << v
        low = bit - 1
        for m, c in at.items():
            if not m & bit:
                continue
            rest = m ^ bit
            if m1 & rest:
                continue
            s = wedge_sign(m1, rest)
            if popcount(m & low) & 1:
                s = -s
            val = c1 * c
            _acc(out, m1 | rest, val if s > 0 else -val)
    return Form._wrap(out)


def contract_vf(rho: VectorForm, sigma: VectorForm) -> VectorForm:
    """i_ρ σ, contracting into the form slot of σ."""
    out: dict = {}
    for p, f in sigma.components().items():
        for m, c in contract(rho, f).items():
            out[(m, p)] = c
    return VectorForm._wrap(out)


def apply_power(op: Callable[[Form], Form], k: int, a: Form) -> Form:
    for _ in range(k):
        if not a:
            break
        a = op(a)
    return a


# ---------------------------------------------------------------------------
# permutation-sum contraction, evaluated on frame vectors


def _perm_sign(seq: Sequence[int]) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        while seq[i] != i:
            j = seq[i]
            seq[i], seq[j] = seq[j], seq[i]
            sign = -sign
    return sign


def evaluate(a: Form, vectors: Sequence[VectorField]) -> Scalar:
    """a(X_1, ..., X_k) in the determinant convention."""
    k = len(vectors)
    total = ZERO
    for m, c in a.items():
        if popcount(m) != k:
            continue
        rows = bits(m)
        det = ZERO
        for perm in permutations(range(k)):
            term = Scalar(_perm_sign(perm))
            for i, j in enumerate(perm):
                x = vectors[j]._coeffs.get(rows[i])
                if x is None:
                    term = ZERO
                    break
                term = term * x
            if term:
                det = det + term
        if det:
            total = total + c * det
    return total


def contract_general(rho: VectorForm, a: Form) -> Form:
    """Contraction from the alternating permutation sum.

    ``(ρ⌟ω)(X_1..X_m) = 1/(k!(r-1)!) Σ_σ sgn σ · ω(ρ(X_σ1..X_σk), X_σ(k+1), ..)``
    with ``m = k + r - 1``.  Coefficients are read off by evaluating on the
    frame vectors of each canonical word, so this does not share code with
    ``contract``.
    """
    n = max(_vf_max(rho), a.max_index(), 1)
    positions = [k - 1 for k in range(1, n + 1)] + [OFFSET + k - 1 for k in range(1, n + 1)]
    frame = {p: VectorField._wrap({p: ONE}) for p in positions}
    out: dict = {}
    rho_by_deg: dict[int, VectorForm] = {}
    for key, c in rho.items():
        rho_by_deg.setdefault(popcount(key[0]), {})[key] = c
    a_by_deg: dict[int, Form] = {}
    for m, c in a.items():
        a_by_deg.setdefault(popcount(m), {})[m] = c
    # every output word is built from indices already present in ρ or a
    support = 0
    for (m, _), _c in rho.items():
        support |= m
    for m in a.terms:
        support |= m
    for k, rterms in rho_by_deg.items():
        rk = VectorForm._wrap(rterms)
        for r, aterms in a_by_deg.items():
            if r == 0:
                continue
            ar = Form._wrap(aterms)
            deg = k + r - 1
            if deg > 2 * n:
                continue
            for T in basis_masks(n, max_degree=deg):
                if popcount(T) != deg or T & ~support:
                    continue
                vecs = [frame[p] for p in bits(T)]
                val = ZERO
                # the summand is constant on cosets of S_k x S_{r-1}, so summing over
                # (k, r-1)-shuffles absorbs the 1/(k!(r-1)!) normalisation
                for head in combinations(range(deg), k):
                    perm = head + tuple(i for i in range(deg) if i not in head)
                    args = [vecs[i] for i in perm]
                    X = _vector_value(rk, args[:k])
                    if not X:
                        continue
                    v = evaluate(ar, [X] + args[k:])
                    if v:
                        val = val + (v if _perm_sign(perm) > 0 else -v)
                if val:
                    _acc(out, T, val)
    return Form._wrap(out)


def _vector_value(rho: VectorForm, args: Sequence[VectorField]) -> VectorField:
    out: dict = {}
    for p, f in rho.components().items():
        v = evaluate(f, args)
        if v:
            out[p] = v
    return VectorField._wrap(out)


def _vf_max(rho: VectorForm) -> int:
    return rho.max_index()


# ---------------------------------------------------------------------------


def is_beltrami_type(phi: VectorForm) -> bool:
    """True iff every term lies in A^{0,1}(T^{1,0})."""
    return all(bidegree(m) == (0, 1) and p < OFFSET for (m, p) in phi._terms)


def exp_contraction(phi: VectorForm, a: Form) -> Form:
    """e^{i_φ} a = Σ_k i_φ^k a / k!, finite because i_φ lowers holomorphic degree."""
    if not is_beltrami_type(phi):
        raise NonBeltramiInput("exp_contraction needs φ in A^{0,1}(T^{1,0})")
    out = a
    term = a
    k = 0
    while True:
        k += 1
        term = contract(phi, term)
        if not term:
            break
        out = out + term.scale(Scalar(1, 0) / factorial(k))
    return out


# ---------------------------------------------------------------------------
# Frölicher–Nijenhuis bracket


def _basis_vector(p: int) -> VectorField:
    return VectorField._wrap({p: ONE})


def _fn_decomposable(spec: FrameSpec, rho: Form, X: int, tau: Form, Y: int) -> VectorForm:
    """Five-term bracket of ρ⊗e_X and τ⊗e_Y."""
    eX, eY = _basis_vector(X), _basis_vector(Y)
    deg = rho.degree() or 0
    sign = -1 if deg & 1 else 1
    out = VectorForm.tensor(wedge(rho, tau), spec.bracket_basis(X, Y))
    out = out + VectorForm.tensor(wedge(rho, lie_derivative_form(spec, eX, tau)), eY)
    out = out - VectorForm.tensor(wedge(lie_derivative_form(spec, eY, rho), tau), eX)
    extra = (VectorForm.tensor(wedge(exterior_d(spec, rho), interior(eX, tau)), eY)
             + VectorForm.tensor(wedge(interior(eY, rho), exterior_d(spec, tau)), eX))
    return out + (extra if sign > 0 else -extra)


def fn_bracket(spec: FrameSpec, phi: VectorForm, psi: VectorForm) -> VectorForm:
    """[φ,ψ] by the decomposable formula, extended bilinearly over stored terms."""
    key = ("fn", phi, psi)
    hit = spec._dcache.get(key)
    if hit is not None:
        return hit
    out = VectorForm.zero()
    for (m1, X), c1 in phi.items():
        r = Form._wrap({m1: ONE})
        for (m2, Y), c2 in psi.items():
            t = Form._wrap({m2: ONE})
            out = out + _fn_decomposable(spec, r, X, t, Y).scale(c1 * c2)
    spec._dcache[key] = out
    return out


def fn_bracket_collected(spec: FrameSpec, phi: VectorForm, psi: VectorForm) -> VectorForm:
    """Same bracket with coefficients collected per frame vector before expanding."""
    out = VectorForm.zero()
    pc, sc = phi.components(), psi.components()
    for X, rho in pc.items():
        for deg in sorted(rho.degrees()):
            rho_d = Form._wrap({m: c for m, c in rho.items() if popcount(m) == deg})
            for Y, tau in sc.items():
                out = out + _fn_decomposable(spec, rho_d, X, tau, Y)
    return out


def fn_bracket_three_term(spec: FrameSpec, phi: VectorForm, psi: VectorForm) -> VectorForm:
    """ρ∧τ⊗[X,Y] + ρ∧L_Xτ⊗Y - L_Yρ∧τ⊗X, valid for (0,1)-forms with T^{1,0} values."""
    out = VectorForm.zero()
    for (m1, X), c1 in phi.items():
        rho = Form._wrap({m1: c1})
        for (m2, Y), c2 in psi.items():
            tau = Form._wrap({m2: c2})
            eX, eY = _basis_vector(X), _basis_vector(Y)
            out = out + VectorForm.tensor(wedge(rho, tau), spec.bracket_basis(X, Y))
            out = out + VectorForm.tensor(wedge(rho, lie_derivative_form(spec, eX, tau)), eY)
            out = out - VectorForm.tensor(wedge(lie_derivative_form(spec, eY, rho), tau), eX)
    return out


def abc_decompose(b: VectorForm) -> tuple[VectorForm, VectorForm, VectorForm]:
    """Split into A^{0,2}(T^{1,0}), A^{1,1}(T^{1,0}) and A^{0,2}(T^{0,1}) parts."""
    A, B, C = {}, {}, {}
    for (m, p), c in b.items():
        t = (*bidegree(m), p < OFFSET)
        if t == (0, 2, True):
            A[(m, p)] = c
        elif t == (1, 1, True):
            B[(m, p)] = c
        elif t == (0, 2, False):
            C[(m, p)] = c
        else:
            raise TypeLeak(f"bracket component of type {t[:2]} with "
                           f"{'T^(1,0)' if t[2] else 'T^(0,1)'} values")
    return VectorForm._wrap(A), VectorForm._wrap(B), VectorForm._wrap(C)


def abc_formula(spec: FrameSpec, phi: VectorForm, psi: VectorForm):
    """The three components written with ∂, μ and the split bracket [X,Y]."""
    A = B = C = VectorForm.zero()
    for (m1, X), c1 in phi.items():
        rho = Form._wrap({m1: c1})
        for (m2, Y), c2 in psi.items():
            tau = Form._wrap({m2: c2})
            eX, eY = _basis_vector(X), _basis_vector(Y)
            br = spec.bracket_basis(X, Y)
            rt = wedge(rho, tau)
            A = A + VectorForm.tensor(rt, br.part10())
            A = A + VectorForm.tensor(wedge(rho, interior(eX, d_component(spec, tau, Part.DEL))), eY)
            A = A - VectorForm.tensor(wedge(interior(eY, d_component(spec, rho, Part.DEL)), tau), eX)
            B = B + VectorForm.tensor(wedge(rho, interior(eX, d_component(spec, tau, Part.MU))), eY)
            B = B - VectorForm.tensor(wedge(interior(eY, d_component(spec, rho, Part.MU)), tau), eX)
            C = C + VectorForm.tensor(rt, br.part01())
    return A, B, C


def dbar_vector(spec: FrameSpec, V: VectorForm) -> VectorForm:
    """∂̄(ρ⊗Y) = ∂̄ρ⊗Y + (-1)^p ρ∧∂̄Y with ∂̄e_k = Σ_j ([e_j̄, e_k]^{1,0}) θ^{j̄}."""
    out = VectorForm.zero()
    for p, rho in V.components().items():
        if p >= OFFSET:
            raise NonBeltramiInput("∂̄ is defined here on T^(1,0)-valued forms only")
        out = out + VectorForm.from_components({p: d_component(spec, rho, Part.DELBAR)})
        dY = _dbar_frame_vector(spec, p)
        for deg in rho.degrees():
            piece = Form._wrap({m: c for m, c in rho.items() if popcount(m) == deg})
            term = dY.wedge_left(piece)
            out = out + (term if deg % 2 == 0 else -term)
    return out


def _dbar_frame_vector(spec: FrameSpec, k: int) -> VectorForm:
    out: dict = {}
    for j in range(spec.n):
        br = spec.bracket_basis(OFFSET + j, k).part10()
        for g, c in br.items():
            out[(1 << (OFFSET + j), g)] = c
    return VectorForm._wrap(out)


# ---------------------------------------------------------------------------
# bundle-valued forms and connections


@dataclass(frozen=True)
class EValuedForm:
    """Section of the trivial rank-r bundle with form coefficients."""

    components: tuple[Form, ...]

    @classmethod
    def of(cls, *forms: Form) -> EValuedForm:
        return cls(tuple(forms))

    @classmethod
    def zero(cls, r: int) -> EValuedForm:
        return cls((Form.zero(),) * r)

    @property
    def rank(self) -> int:
        return len(self.components)

    def map(self, f: Callable[[Form], Form]) -> EValuedForm:
        return EValuedForm(tuple(f(c) for c in self.components))

    def __add__(self, other: EValuedForm) -> EValuedForm:
        _same_rank(self, other)
        return EValuedForm(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: EValuedForm) -> EValuedForm:
        _same_rank(self, other)
        return EValuedForm(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> EValuedForm:
        return self.map(lambda f: -f)

    def scale(self, c) -> EValuedForm:
        return self.map(lambda f: f.scale(c))

    def __bool__(self) -> bool:
        return any(self.components)

    def __eq__(self, other) -> bool:
        if isinstance(other, EValuedForm):
            return self.components == other.components
        if other == 0:
            return not self
        return NotImplemented

    __hash__ = None


def _same_rank(a: EValuedForm, b: EValuedForm) -> None:
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} vs rank {b.rank}")


Section = Union[Form, EValuedForm]


def lift(f: Callable[[Form], Form], s: Section) -> Section:
    if isinstance(s, Form):
        return f(s)
    return s.map(f)


@dataclass(frozen=True, eq=False)
class Connection:
    """∇s = ds + ω·s on the trivial bundle of rank r, ω an r×r matrix of 1-forms."""

    spec: FrameSpec
    omega: tuple[tuple[Form, ...], ...]

    def __post_init__(self):
        om = tuple(tuple(row) for row in self.omega)
        r = len(om)
        if any(len(row) != r for row in om):
            raise RankMismatch("connection matrix must be square")
        for row in om:
            for f in row:
                if f and f.degrees() != {1}:
                    raise ValueError("connection entries must be 1-forms")
        object.__setattr__(self, "omega", om)

    @classmethod
    def trivial(cls, spec: FrameSpec, rank: int = 1) -> Connection:
        return cls(spec, tuple((Form.zero(),) * rank for _ in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.omega)

    def is_flat_d(self) -> bool:
        return not any(f for row in self.omega for f in row)

    def _omega_part(self, which: str) -> tuple[tuple[Form, ...], ...]:
        if which == "all":
            return self.omega
        p, q = (1, 0) if which == "10" else (0, 1)
        return tuple(tuple(project(f, p, q) for f in row) for row in self.omega)

    def _check(self, s: EValuedForm) -> None:
        if s.rank != self.rank:
            raise RankMismatch(f"section of rank {s.rank} for a rank-{self.rank} connection")

    def _act(self, diff: Callable[[Form], Form], om, s: EValuedForm) -> EValuedForm:
        self._check(s)
        comps = []
        for a in range(self.rank):
            v = diff(s.components[a])
            for b in range(self.rank):
                if om[a][b] and s.components[b]:
                    v = v + wedge(om[a][b], s.components[b])
            comps.append(v)
        return EValuedForm(tuple(comps))


def nabla_apply(conn: Connection, s: Section) -> Section:
    spec = conn.spec
    if isinstance(s, Form):
        if conn.rank != 1:
            raise RankMismatch("plain forms are rank-1 sections")
        return nabla_apply(conn, EValuedForm.of(s)).components[0]
    return conn._act(lambda f: exterior_d(spec, f), conn.omega, s)


def nabla_part(conn: Connection, s: Section, part: Part) -> Section:
    """Type component of ∇: μ and μ̄ act componentwise; ω splits into ∇^{1,0}, ∇^{0,1}."""
    spec = conn.spec
    if isinstance(s, Form):
        if conn.rank != 1:
            raise RankMismatch("plain forms are rank-1 sections")
        return nabla_part(conn, EValuedForm.of(s), part).components[0]
    diff = lambda f: d_component(spec, f, part)
    if part in (Part.MU, Part.MUBAR):
        conn._check(s)
        return s.map(diff)
    om = conn._omega_part("10" if part is Part.DEL else "01")
    return conn._act(diff, om, s)


def gen_lie(rho: VectorForm, conn: Connection, s: Section) -> Section:
    """L^∇_ρ = i_ρ∘∇ + (-1)^{|ρ|} ∇∘i_ρ."""
    return gen_lie_op(rho, lambda x: nabla_apply(conn, x), s)


def gen_lie_op(rho: VectorForm, D: Callable[[Section], Section], s: Section) -> Section:
    """L^D_ρ for any odd operator D acting on sections."""
    deg = rho.degree()
    if deg is None:
        if not rho:
            return lift(lambda f: Form.zero(), s)
        raise ValueError("generalized Lie derivative needs a homogeneous vector form")
    i = lambda x: lift(lambda f: contract(rho, f), x)
    first = i(D(s))
    second = D(i(s))
    return first + second if deg % 2 == 0 else first - second


def anticommutation_residual(phi: VectorForm, psi: VectorForm, a: Form) -> Form:
    """i_φ i_ψ a - (-1)^{(q+1)(s+1)} i_ψ i_φ a for φ ∈ A^{0,q}(T^{1,0}), ψ ∈ A^{0,s}(T^{1,0})."""
    q, s = _antihol_type(phi), _antihol_type(psi)
    lhs = contract(phi, contract(psi, a))
    rhs = contract(psi, contract(phi, a))
    return lhs - rhs if ((q + 1) * (s + 1)) % 2 == 0 else lhs + rhs


def _antihol_type(phi: VectorForm) -> int:
    types = phi.types()
    if not types:
        return 0
    if len(types) != 1:
        raise NonBeltramiInput("expected a homogeneous A^{0,q}(T^{1,0}) vector form")
    p, q, v = next(iter(types))
    if p != 0 or v != "10":
        raise NonBeltramiInput("expected a homogeneous A^{0,q}(T^{1,0}) vector form")
    return q


# ---------------------------------------------------------------------------
# bracket identities as residuals


def _i(rho: VectorForm, s: Section) -> Section:
    return lift(lambda f: contract(rho, f), s)


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


def abc_commutator_residuals(A: VectorForm, B: VectorForm, C: VectorForm, xi: VectorForm,
                             a: Form) -> dict[str, Form]:
    """[i_A,i_ξ] = 0, [i_B,i_ξ] = -i_{i_ξ B}, [i_C,i_ξ] = i_{i_C ξ}."""
    comm = lambda r: contract(r, contract(xi, a)) - contract(xi, contract(r, a))
    return {
        "[i_A,i_xi]": comm(A),
        "[i_B,i_xi] + i_(i_xi B)": comm(B) + contract(contract_vf(xi, B), a),
        "[i_C,i_xi] - i_(i_C xi)": comm(C) - contract(contract_vf(C, xi), a),
    }


def bracket_commutator_residuals(spec: FrameSpec, phi: VectorForm, psi: VectorForm,
                                 xi: VectorForm, a: Form) -> dict[str, Form]:
    """[i_{[φ,ψ]}, i_ξ] against i_{(i_{[φ,ψ]}ξ - i_ξ[φ,ψ])} and i_{(i_𝒞ξ - i_ξℬ)}."""
    br = fn_bracket(spec, phi, psi)
    _, B, C = abc_decompose(br)
    lhs = contract(br, contract(xi, a)) - contract(xi, contract(br, a))
    full = contract_vf(br, xi) - contract_vf(xi, br)
    split = contract_vf(C, xi) - contract_vf(xi, B)
    return {"full": lhs - contract(full, a), "split": lhs - contract(split, a)}


def nested_commutator_residual(phi: VectorForm, psi: VectorForm, xi: VectorForm,
                               a: Form) -> Form:
    """i_φ i_χ - i_χ i_φ with χ = i_ψ ξ - i_ξ ψ, ψ the sum of 𝒜/ℬ/𝒞 types."""
    chi = contract_vf(psi, xi) - contract_vf(xi, psi)
    return contract(phi, contract(chi, a)) - contract(chi, contract(phi, a))


def lie_commutator(D: Callable[[Section], Section], phi: VectorForm, psi: VectorForm,
                   s: Section) -> Section:
    """Graded commutator [L^D_φ, i_ψ] with |L_φ| = |φ| and |i_ψ| = |ψ| - 1."""
    p, q = phi.degree() or 0, psi.degree() or 0
    first = gen_lie_op(phi, D, _i(psi, s))
    second = _i(psi, gen_lie_op(phi, D, s))
    return first - second if _sgn(p * (q - 1)) > 0 else first + second


def lie_commutator_residual(conn: Connection, spec: FrameSpec, phi: VectorForm,
                            psi: VectorForm, s: Section) -> Section:
    """[L^∇_φ, i_ψ] - i_{[φ,ψ]} + (-1)^{|φ|(|ψ|-1)} L^∇_{i_ψ φ}."""
    D = lambda x: nabla_apply(conn, x)
    p, q = phi.degree() or 0, psi.degree() or 0
    lhs = lie_commutator(D, phi, psi, s)
    rhs = _i(fn_bracket(spec, phi, psi), s)
    inner = contract_vf(psi, phi)
    if inner:
        corr = gen_lie_op(inner, D, s)
        rhs = rhs - corr if _sgn(p * (q - 1)) > 0 else rhs + corr
    return lhs - rhs


def beltrami_lie_commutator_residual(conn: Connection, spec: FrameSpec, phi: VectorForm,
                                     psi: VectorForm, s: Section) -> Section:
    """[L^∇_φ, i_ψ] - i_{[φ,ψ]} for φ, ψ of Beltrami type."""
    D = lambda x: nabla_apply(conn, x)
    return lie_commutator(D, phi, psi, s) - _i(fn_bracket(spec, phi, psi), s)


def decomposable_lie_residual(conn: Connection, rho: Form, X: int, s: Section) -> Section:
    """L^∇_{ρ⊗e_X} s - (ρ∧L^∇_{e_X} s + (-1)^{|ρ|} dρ∧(e_X⌟s))."""
    D = lambda x: nabla_apply(conn, x)
    eX = _basis_vector(X)
    lhs = gen_lie_op(VectorForm.tensor(rho, eX), D, s)
    lie_X = gen_lie_op(VectorForm.tensor(Form.constant(1), eX), D, s)
    k = rho.degree() or 0
    drho = exterior_d(conn.spec, rho)
    rhs = lift(lambda f: wedge(rho, f), lie_X)
    tail = lift(lambda f: wedge(drho, interior(eX, f)), s)
    rhs = rhs + tail if _sgn(k) > 0 else rhs - tail
    return lhs - rhs


def _four_terms(P: Callable[[Section], Section], phi: VectorForm, psi: VectorForm,
                s: Section) -> Section:
    """-P i_φ i_ψ - i_ψ i_φ P + i_ψ P i_φ + i_φ P i_ψ."""
    return (-P(_i(phi, _i(psi, s))) - _i(psi, _i(phi, P(s)))
            + _i(psi, P(_i(phi, s))) + _i(phi, P(_i(psi, s))))


def split_bracket_residuals(spec: FrameSpec, phi: VectorForm, psi: VectorForm, s: Section,
                            conn: Connection | None = None) -> dict[str, Section]:
    """The contraction by each type piece of [φ,ψ] as a four-term expression in one part of ∇."""
    if conn is None:
        conn = Connection.trivial(spec, 1 if isinstance(s, Form) else s.rank)
    A, B, C = abc_decompose(fn_bracket(spec, phi, psi))
    terms = {P: _four_terms(lambda x, P=P: nabla_part(conn, x, P), phi, psi, s) for P in Part}
    return {
        "i_A = nabla^(1,0) terms": _i(A, s) - terms[Part.DEL],
        "i_(B+C) = mu terms": _i(B + C, s) - terms[Part.MU],
        "0 = nabla^(0,1) terms": terms[Part.DELBAR],
        "0 = mubar terms": terms[Part.MUBAR],
        "i_[phi,psi] = sum": _i(A + B + C, s) - terms[Part.DEL] - terms[Part.MU],
    }


def tian_todorov_residuals(spec: FrameSpec, phi: VectorForm, psi: VectorForm,
                           omega: Form) -> dict[str, Form]:
    """Contractions of [φ,ψ] and its pieces into Ω ∈ A^{n,0}."""
    dl = lambda x: d_component(spec, x, Part.DEL)
    mu = lambda x: d_component(spec, x, Part.MU)
    A, B, C = abc_decompose(fn_bracket(spec, phi, psi))
    pp = contract(phi, contract(psi, omega))
    a_rhs = contract(phi, dl(contract(psi, omega))) - dl(pp) + contract(psi, dl(contract(phi, omega)))
    return {
        "[phi,psi] Omega": contract(A + B + C, omega) - (a_rhs - mu(pp)),
        "C Omega": contract(C, omega),
        "A Omega": contract(A, omega) - a_rhs,
        "B Omega": contract(B, omega) + mu(pp),
    }
