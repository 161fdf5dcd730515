"""μ̄- and Dolbeault cohomology of invariant forms, and closedness criteria for
deformed (n,0)- and (n,q)-forms.

For a non-abelian frame these are cohomologies of the invariant subcomplex
(Lie-algebra cohomology), which need not agree with the cohomology of a
compact quotient; reports label them "invariant cohomology".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from . import linalg as la
from .algebra import OFFSET, Form, VectorForm, basis_masks, bidegree
from .contraction import abc_decompose, contract
from .deformation import (
    HALF, DeformedStructure, _antihol_endo, bracket_terms, exp_pair, finv_apply,
    maurer_cartan, o2_apply,
)
from .errors import InducedMapIllDefined, MCViolation, PreconditionViolation
from .frame import FrameSpec, Part, d_component
from .scalar import ONE, ZERO, Scalar

Vector = tuple[Scalar, ...]


def _masks(spec: FrameSpec, p: int, q: int) -> list[int]:
    if p < 0 or q < 0 or p > spec.n or q > spec.n:
        return []
    return basis_masks(spec.n, p, q)


def coords(a: Form, masks: list[int]) -> Vector:
    t = a.terms
    return tuple(t.get(m, ZERO) for m in masks)


def from_coords(v: Vector, masks: list[int]) -> Form:
    return Form._wrap({m: c for m, c in zip(masks, v) if c})


@dataclass(frozen=True)
class CochainBasis:
    """Basis words of A^{p,q} with the matrices of μ̄ and ∂̄ (columns = images)."""

    spec: FrameSpec
    p: int
    q: int
    masks: list[int]
    mu_bar: la.Matrix      # A^{p,q} -> A^{p-1,q+2}
    dbar: la.Matrix        # A^{p,q} -> A^{p,q+1}

    @classmethod
    def build(cls, spec: FrameSpec, p: int, q: int) -> CochainBasis:
        src = _masks(spec, p, q)
        mb_t, db_t = _masks(spec, p - 1, q + 2), _masks(spec, p, q + 1)
        mb_cols = [coords(d_component(spec, Form.basis(m), Part.MUBAR), mb_t) for m in src]
        db_cols = [coords(d_component(spec, Form.basis(m), Part.DELBAR), db_t) for m in src]
        return cls(spec, p, q, src, _from_columns(mb_cols, len(mb_t)),
                   _from_columns(db_cols, len(db_t)))

    @property
    def dim(self) -> int:
        return len(self.masks)


def _from_columns(cols: list[Vector], nrows: int) -> la.Matrix:
    return tuple(tuple(c[r] for c in cols) for r in range(nrows))


def _apply(M: la.Matrix, v: Vector) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v) if x and y), ZERO) for row in M)


def _in_span(basis: list[Vector], vecs: list[Vector], dim: int) -> bool:
    r = la.rank(list(basis), dim)
    return la.rank(list(basis) + list(vecs), dim) == r


def _complement(sub: list[Vector], vecs: list[Vector], dim: int) -> list[Vector]:
    """Members of ``vecs`` that extend ``sub`` to a basis of their joint span, greedily in order."""
    chosen: list[Vector] = []
    r = la.rank(list(sub), dim)
    for v in vecs:
        r2 = la.rank(list(sub) + chosen + [v], dim)
        if r2 > r:
            chosen.append(v)
            r = r2
    return chosen


@dataclass(frozen=True)
class MuBarCohomology:
    p: int
    q: int
    cycles: list[Vector]         # basis of ker μ̄ on A^{p,q}
    boundaries: list[Vector]     # basis of im μ̄ from A^{p+1,q-2}
    representatives: list[Form]
    masks: list[int]

    @property
    def dim(self) -> int:
        return len(self.cycles) - len(self.boundaries)


def _cycles(cb: CochainBasis) -> list[Vector]:
    if not cb.masks:
        return []
    if not cb.mu_bar:
        return [tuple(ONE if i == j else ZERO for j in range(cb.dim)) for i in range(cb.dim)]
    return la.nullspace(cb.mu_bar, cb.dim)


def _boundaries(spec: FrameSpec, p: int, q: int, masks: list[int]) -> list[Vector]:
    src = CochainBasis.build(spec, p + 1, q - 2)
    cols = [tuple(r[j] for r in src.mu_bar) for j in range(src.dim)] if src.mu_bar else []
    return la.row_space_basis(cols, len(masks)) if masks else []


def mu_bar_cohomology(spec: FrameSpec, p: int, q: int) -> MuBarCohomology:
    cb = CochainBasis.build(spec, p, q)
    Z = _cycles(cb)
    B = _boundaries(spec, p, q, cb.masks)
    if not _in_span(Z, B, cb.dim):
        raise InducedMapIllDefined(f"im μ̄ ⊄ ker μ̄ in bidegree ({p},{q})")
    reps = [from_coords(v, cb.masks) for v in _complement(B, Z, cb.dim)]
    return MuBarCohomology(p, q, Z, B, reps, cb.masks)


@dataclass(frozen=True)
class DolbeaultCohomology:
    p: int
    q: int
    mu_bar: MuBarCohomology
    closed: list[Vector]         # K = {x ∈ ker μ̄ : ∂̄x ∈ im μ̄}
    exact: list[Vector]          # basis of im μ̄ + ∂̄(ker μ̄ on A^{p,q-1})
    representatives: list[Form]

    @property
    def dim(self) -> int:
        return len(self.closed) - len(self.exact)


def _dbar_images(spec: FrameSpec, vecs: list[Vector], cb: CochainBasis) -> list[Vector]:
    return [_apply(cb.dbar, v) for v in vecs] if cb.dbar else [()] * len(vecs)


def check_induced_dbar(spec: FrameSpec, p: int, q: int) -> None:
    """∂̄ preserves ker μ̄ and im μ̄, and ∂̄² lands in im μ̄, in bidegree (p,q)."""
    h, h1, h2 = (mu_bar_cohomology(spec, p, q + k) for k in range(3))
    cb, cb1 = CochainBasis.build(spec, p, q), CochainBasis.build(spec, p, q + 1)
    dZ = _dbar_images(spec, h.cycles, cb)
    dB = _dbar_images(spec, h.boundaries, cb)
    n1 = len(h1.masks)
    if n1 and not _in_span(h1.cycles, dZ, n1):
        raise InducedMapIllDefined(f"∂̄ does not map ker μ̄ into ker μ̄ at ({p},{q})")
    if n1 and not _in_span(h1.boundaries, dB, n1):
        raise InducedMapIllDefined(f"∂̄ does not map im μ̄ into im μ̄ at ({p},{q})")
    if h2.masks and n1:
        ddZ = _dbar_images(spec, dZ, cb1)
        if not _in_span(h2.boundaries, ddZ, len(h2.masks)):
            raise InducedMapIllDefined(f"induced ∂̄² is nonzero at ({p},{q})")


def dolbeault_cohomology(spec: FrameSpec, p: int, q: int, check: bool = True) -> DolbeaultCohomology:
    if check:
        check_induced_dbar(spec, p, q)
        if q >= 1:
            check_induced_dbar(spec, p, q - 1)
    h = mu_bar_cohomology(spec, p, q)
    cb = CochainBasis.build(spec, p, q)
    dim = cb.dim
    # closed classes: x = Σ c_i z_i with ∂̄x ∈ im μ̄ on A^{p,q+1}
    h1 = mu_bar_cohomology(spec, p, q + 1)
    Z = h.cycles
    if not Z:
        closed: list[Vector] = []
    elif not h1.masks:
        closed = list(Z)
    else:
        dZ = _dbar_images(spec, Z, cb)
        cols = dZ + list(h1.boundaries)
        M = _from_columns(cols, len(h1.masks))
        null = la.nullspace(M, len(cols))
        combos = [v[:len(Z)] for v in null]
        closed = la.row_space_basis(
            [tuple(sum((c * z[k] for c, z in zip(cv, Z) if c), ZERO) for k in range(dim))
             for cv in combos], dim)
    # exact: im μ̄ + ∂̄(ker μ̄ on A^{p,q-1})
    gens = list(h.boundaries)
    if q >= 1:
        hm = mu_bar_cohomology(spec, p, q - 1)
        cbm = CochainBasis.build(spec, p, q - 1)
        if hm.cycles and dim:
            gens += _dbar_images(spec, hm.cycles, cbm)
    exact = la.row_space_basis(gens, dim) if dim else []
    if check and not _in_span(closed, exact, dim):
        raise InducedMapIllDefined(f"exact classes are not closed at ({p},{q})")
    reps = [from_coords(v, cb.masks) for v in _complement(exact, closed, dim)]
    return DolbeaultCohomology(p, q, h, closed, exact, reps)


@dataclass(frozen=True)
class CohomologyReport:
    spec_name: str
    n: int
    dims: dict[tuple[int, int], tuple[int, int]] = field(default_factory=dict)
    representatives: dict[tuple[int, int], list[Form]] = field(default_factory=dict)

    def table(self) -> str:
        n = self.n
        lines = [f"invariant cohomology of {self.spec_name or 'frame'} (n={n}): "
                 "dim H_mubar / dim H_Dol"]
        header = "p\\q " + " ".join(f"{q:>7}" for q in range(n + 1))
        lines.append(header)
        for p in range(n + 1):
            row = " ".join(f"{self.dims[(p, q)][0]:>3}/{self.dims[(p, q)][1]:<3}"
                           for q in range(n + 1))
            lines.append(f"{p:>3} {row}")
        return "\n".join(lines)


def cohomology_report(spec: FrameSpec, bidegrees=None) -> CohomologyReport:
    if bidegrees is None:
        bidegrees = [(p, q) for p in range(spec.n + 1) for q in range(spec.n + 1)]
    rep = CohomologyReport(spec.name, spec.n)
    for p, q in bidegrees:
        dol = dolbeault_cohomology(spec, p, q)
        rep.dims[(p, q)] = (dol.mu_bar.dim, dol.dim)
        rep.representatives[(p, q)] = dol.representatives
    return rep


def torus_dimension(n: int, p: int, q: int) -> int:
    return comb(n, p) * comb(n, q)


# ---------------------------------------------------------------------------
# closedness of deformed forms


def _require(a: Form, p: int, q: int, what: str) -> None:
    if a and a.bidegrees() != {(p, q)}:
        raise ValueError(f"{what} must be homogeneous of bidegree ({p},{q})")


def rho_endo(ds: DeformedStructure) -> VectorForm:
    """φ̄(I'-φφ̄)^{-1} as the contraction θ^{j̄} ↦ Σ_k (φ̄(I'-φφ̄)^{-1})[j][k] θ^k."""
    M = la.matmul(ds.phi.conj_entries, ds.transition.A_inv)
    return _antihol_endo(M, ds.n, True, False)


def b_inverse_endo(ds: DeformedStructure) -> VectorForm:
    """(I''-φ̄φ)^{-1} acting on antiholomorphic generators only."""
    return _antihol_endo(ds.transition.B_inv, ds.n, True, True)


def o1_prime_endo(ds: DeformedStructure) -> VectorForm:
    """I' + (I''-φ̄φ)^{-1}."""
    return VectorForm.hol_identity(ds.n) + b_inverse_endo(ds)


def n0_terms(ds: DeformedStructure, omega: Form) -> tuple[Form, Form]:
    """X = ∂̄Ω + ∂(φ⌟Ω) - ½ℬ(φ,φ)⌟Ω and Y = φ̄(I'-φφ̄)^{-1}⌟μ̄Ω."""
    spec, phi = ds.base, ds.phi
    _, (_, B, _), _ = bracket_terms(spec, phi)
    v = phi.vector_form
    X = (d_component(spec, omega, Part.DELBAR)
         + d_component(spec, contract(v, omega), Part.DEL)
         - contract(B.scale(HALF), omega))
    Y = contract(rho_endo(ds), d_component(spec, omega, Part.MUBAR))
    return X, Y


def _require_mc(ds: DeformedStructure) -> None:
    mc = maurer_cartan(ds.base, ds.phi)
    if mc:
        raise MCViolation(f"MC(φ) ≠ 0 for {ds.phi!r}")


def n0_closedness_predicate(ds: DeformedStructure, omega: Form) -> bool:
    """e^{i_φ|i_φ̄}Ω is ∂̄_φ-closed iff X - φ̄(I'-φφ̄)^{-1}⌟μ̄Ω = 0 (needs MC(φ) = 0).

    X is as in ``n0_terms``.  The contraction convention ρ⌟α = η∧(X⌟α) gives
    no extra sign in front of X; see ``n0_closedness_signed`` for the variant
    carrying (-1)^n.
    """
    _require(omega, ds.n, 0, "Ω")
    _require_mc(ds)
    X, Y = n0_terms(ds, omega)
    return not (X - Y)


def n0_closedness_signed(ds: DeformedStructure, omega: Form) -> bool:
    """The same condition with (-1)^n in front of X; equal to the above for even n."""
    _require(omega, ds.n, 0, "Ω")
    _require_mc(ds)
    X, Y = n0_terms(ds, omega)
    return not (X.scale(-1 if ds.n % 2 else 1) - Y)


def native_dbar(ds: DeformedStructure, a: Form) -> Form:
    """∂̄_φ of e^{i_φ|i_φ̄}(a), computed from the structure data in the deformed frame."""
    return ds.native_part(exp_pair(ds, a), Part.DELBAR)


def native_mubar(ds: DeformedStructure, a: Form) -> Form:
    return ds.native_part(exp_pair(ds, a), Part.MUBAR)


def dolbeault_class_predicate(ds: DeformedStructure, omega: Form) -> bool:
    """For [[Ω]] ∈ H^{n,0}_Dol and MC(φ) = 0: ∂(φ⌟Ω) - ½ℬ(φ,φ)⌟Ω = 0."""
    _require(omega, ds.n, 0, "Ω")
    spec = ds.base
    if maurer_cartan(spec, ds.phi):
        raise PreconditionViolation("MC(φ) ≠ 0", "maurer_cartan")
    if d_component(spec, omega, Part.MUBAR):
        raise PreconditionViolation("μ̄Ω ≠ 0, so Ω defines no μ̄-class", "mu_bar_closed")
    if d_component(spec, omega, Part.DELBAR):
        # im μ̄ in bidegree (n,1) comes from (n+1,-1) and is zero
        raise PreconditionViolation("∂̄Ω ∉ im μ̄", "dbar_class_closed")
    _, (_, B, _), _ = bracket_terms(spec, ds.phi)
    v = ds.phi.vector_form
    return not (d_component(spec, contract(v, omega), Part.DEL) - contract(B.scale(HALF), omega))


def native_dolbeault_class(ds: DeformedStructure, omega: Form) -> bool:
    """[[e^{i_φ|i_φ̄}Ω]] defines a J_φ-Dolbeault class: μ̄_φ and ∂̄_φ both vanish on it."""
    return not native_mubar(ds, omega) and not native_dbar(ds, omega)


def nq_terms(ds: DeformedStructure, xi: Form) -> tuple[Form, Form]:
    """The (n,q+1) and (n-1,q+2) pieces of O₂ applied to (I - φ̄φ)Finv Ξ."""
    n = ds.n
    P, Pb = ds.phi.entries, ds.phi.conj_entries
    lower = la.sub(la.identity(n), la.matmul(Pb, P))
    endo = VectorForm.hol_identity(n) + _antihol_endo(lower, n, True, True)
    x = finv_apply(endo, xi)
    y = o2_apply(ds.base, ds.phi, x)
    q = xi.bidegree()[1] if xi else 0
    return y.project(n, q + 1), y.project(n - 1, q + 2)


def nq_condition(ds: DeformedStructure, xi: Form) -> Form:
    """(I'+(I''-φ̄φ)^{-1})Finv((∂̄+[∂,i_φ]-i_{½(ℬ+𝒞)} - i_{φ̄(I'-φφ̄)^{-1}}(μ̄+i_MC))(I-φ̄φ)Finv Ξ)."""
    z1, z2 = nq_terms(ds, xi)
    return finv_apply(o1_prime_endo(ds), z1 - contract(rho_endo(ds), z2))


def nq_closedness_predicate(ds: DeformedStructure, xi: Form) -> bool:
    _require(xi, ds.n, xi.bidegree()[1] if xi else 0, "Ξ")
    if xi and xi.bidegree()[0] != ds.n:
        raise ValueError("Ξ must have holomorphic degree n")
    return not nq_condition(ds, xi)


# ---------------------------------------------------------------------------
# projection identities for O₁Finv on top-holomorphic-degree forms


def projection_residuals(ds: DeformedStructure, a: Form) -> dict[str, Form]:
    """Projections of O₁Finv a onto A^{n,·} and A^{n-1,·} against their closed forms.

    For a ∈ A^{n,q}:   P^{n,q}(O₁Finv a) = (I'+(I''-φ̄φ)^{-1})Finv a.
    For a ∈ A^{n-1,q}: P^{n,q-1}(O₁Finv a) = -(I'+(I''-φ̄φ)^{-1})Finv(φ̄(I'-φφ̄)^{-1}⌟a),
                       P^{n-1,q}(O₁Finv a) = (I'+(I''-φ̄φ)^{-1})Finv a.
    With one antiholomorphic factor (I'+(I''-φ̄φ)^{-1})Finv equals the plain
    contraction (I''-φ̄φ)^{-1}⌟.
    """
    n = ds.n
    p, q = a.bidegree()
    img = ds.O1(a)
    prime = o1_prime_endo(ds)
    out = {}
    if p == n:
        out["top"] = img.project(n, q) - finv_apply(prime, a)
        if q == 1:
            out["top, as contraction"] = img.project(n, q) - contract(b_inverse_endo(ds), a)
    elif p == n - 1:
        out["raise"] = (img.project(n, q - 1)
                        + finv_apply(prime, contract(rho_endo(ds), a)))
        out["keep"] = img.project(n - 1, q) - finv_apply(prime, a)
    else:
        raise ValueError("projection identities concern holomorphic degree n or n-1")
    return out


def signed_top_projection_residual(ds: DeformedStructure, theta: Form) -> Form:
    """P^{n,1}(O₁Finv Θ) - (-1)^n (I''-φ̄φ)^{-1}⌟Θ for Θ ∈ A^{n,1}."""
    _require(theta, ds.n, 1, "Θ")
    rhs = contract(b_inverse_endo(ds), theta)
    return ds.O1(theta).project(ds.n, 1) - (rhs.scale(-1) if ds.n % 2 else rhs)


def integrable_reduction_residual(ds: DeformedStructure, omega: Form) -> Form:
    """On an integrable frame: (X - φ̄(I'-φφ̄)^{-1}⌟μ̄Ω) - (∂̄Ω + ∂(φ⌟Ω))."""
    spec = ds.base
    if not spec.is_integrable():
        raise PreconditionViolation("frame is not integrable", "integrable")
    X, Y = n0_terms(ds, omega)
    v = ds.phi.vector_form
    reduced = (d_component(spec, omega, Part.DELBAR)
               + d_component(spec, contract(v, omega), Part.DEL))
    return (X - Y) - reduced
