import pytest
import sympy

from almostcx import Form, Part, Scalar, d_component
from almostcx.algebra import basis_masks
from almostcx.cohomology import (
    cohomology_report, coords, dolbeault_class_predicate, dolbeault_cohomology,
    integrable_reduction_residual, mu_bar_cohomology, n0_closedness_predicate,
    n0_closedness_signed, n0_terms, native_dbar, native_dolbeault_class,
    nq_closedness_predicate, projection_residuals, signed_top_projection_residual,
    torus_dimension,
)
from almostcx.deformation import deform_structure, maurer_cartan, random_beltramis
from almostcx.errors import MCViolation, PreconditionViolation, SingularTransition
from almostcx.fixtures import (
    f2, f3, iwasawa, kodaira_thurston, kodaira_thurston_integrable, phi_t, sign_witness,
    sign_witness_phi, single_entry, solvable_holomorphic, solvable_phi, top_form, torus,
    valid_frames,
)

t1, t2, t3 = (Form.coframe(k) for k in (1, 2, 3))
b1, b2, b3 = (Form.coframe(k, True) for k in (1, 2, 3))


# independent rank oracle

def _sym(c):
    return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
        c.im.numerator, c.im.denominator)


def _matrix(spec, part, p, q):
    s, t = part.shift
    src = basis_masks(spec.n, p, q) if 0 <= p <= spec.n and 0 <= q <= spec.n else []
    dst = (basis_masks(spec.n, p + s, q + t)
           if 0 <= p + s <= spec.n and 0 <= q + t <= spec.n else [])
    cols = [[_sym(x) for x in coords(d_component(spec, Form.basis(m), part), dst)] for m in src]
    return sympy.Matrix(len(dst), len(src), lambda i, j: cols[j][i])


def _rank(M):
    return 0 if 0 in M.shape else M.rank()


def oracle_dims(spec, p, q):
    """(dim H_mubar, dim H_Dol) by sympy ranks and nullities."""
    M_out = _matrix(spec, Part.MUBAR, p, q)
    M_in = _matrix(spec, Part.MUBAR, p + 1, q - 2)
    dim_a = M_out.shape[1]
    h_mu = dim_a - _rank(M_out) - _rank(M_in)
    Z = M_out.nullspace() if dim_a else []
    Zb = sympy.Matrix.hstack(*Z) if Z else sympy.zeros(dim_a, 0)
    D = _matrix(spec, Part.DELBAR, p, q)
    Bm = _matrix(spec, Part.MUBAR, p + 1, q - 1)
    DZ = D * Zb
    stacked = sympy.Matrix.hstack(DZ, -Bm)
    null_stacked = stacked.shape[1] - _rank(stacked)
    null_b = Bm.shape[1] - _rank(Bm)
    dim_k = null_stacked - null_b
    M_prev = _matrix(spec, Part.MUBAR, p, q - 1)
    Zp = M_prev.nullspace() if M_prev.shape[1] else []
    Zpb = sympy.Matrix.hstack(*Zp) if Zp else sympy.zeros(M_prev.shape[1], 0)
    exact = sympy.Matrix.hstack(M_in, _matrix(spec, Part.DELBAR, p, q - 1) * Zpb)
    return h_mu, dim_k - _rank(exact)


ORACLE_FRAMES = [torus(2), f2(), f3(), kodaira_thurston(), kodaira_thurston_integrable(),
                 iwasawa(), sign_witness()]


@pytest.mark.parametrize("spec", ORACLE_FRAMES, ids=lambda s: s.name)
def test_dimensions_match_rank_oracle(spec):
    for p in range(spec.n + 1):
        for q in range(spec.n + 1):
            dol = dolbeault_cohomology(spec, p, q)
            assert (dol.mu_bar.dim, dol.dim) == oracle_dims(spec, p, q), (p, q)


@pytest.mark.parametrize("n", [2, 3])
def test_torus_anchor(n):
    for p in range(n + 1):
        for q in range(n + 1):
            assert dolbeault_cohomology(torus(n), p, q).dim == torus_dimension(n, p, q)
            assert mu_bar_cohomology(torus(n), p, q).dim == torus_dimension(n, p, q)


def test_f2_values():
    spec = f2()
    assert mu_bar_cohomology(spec, 1, 0).dim == 2
    assert mu_bar_cohomology(spec, 0, 2).dim == 2
    assert mu_bar_cohomology(spec, 3, 0).dim == 0
    assert dolbeault_cohomology(spec, 3, 0).dim == 0
    assert d_component(spec, t1 ^ t2 ^ t3, Part.MUBAR) == (t2 ^ t3 ^ b2 ^ b3)


def test_known_hodge_numbers():
    kt = cohomology_report(kodaira_thurston_integrable())
    assert {k: v[1] for k, v in kt.dims.items() if k in [(1, 0), (0, 1), (1, 1)]} == {
        (1, 0): 1, (0, 1): 2, (1, 1): 2}
    iw = cohomology_report(iwasawa())
    rows = [[iw.dims[(p, q)][1] for q in range(4)] for p in range(4)]
    assert rows == [[1, 2, 2, 1], [3, 6, 6, 3], [3, 6, 6, 3], [1, 2, 2, 1]]


@pytest.mark.parametrize("spec", valid_frames(), ids=lambda s: s.name)
def test_representatives_are_classes(spec):
    for p in range(spec.n + 1):
        for q in range(spec.n + 1):
            dol = dolbeault_cohomology(spec, p, q)
            assert len(dol.representatives) == dol.dim
            for r in dol.representatives:
                assert r.bidegree() == (p, q)
                assert not d_component(spec, r, Part.MUBAR)


# deformation criteria

def test_worked_example_true_both_routes():
    ds = deform_structure(f2(), phi_t())
    om = top_form(3)
    assert n0_closedness_predicate(ds, om)
    assert not native_dbar(ds, om)


def test_torus_criteria_hold():
    ds = deform_structure(torus(3), random_beltramis(3, 1, seed=3)[0])
    om = top_form(3)
    assert n0_closedness_predicate(ds, om) and not native_dbar(ds, om)
    assert dolbeault_class_predicate(ds, om) and native_dolbeault_class(ds, om)
    for q in range(4):
        for m in basis_masks(3, 3, q):
            xi = Form.basis(m)
            assert nq_closedness_predicate(ds, xi) and not native_dbar(ds, xi)


def test_sign_witness_separates_the_two_signs():
    ds = deform_structure(sign_witness(), sign_witness_phi())
    om = top_form(3)
    assert not maurer_cartan(ds.base, ds.phi)
    X, Y = n0_terms(ds, om)
    assert X and Y
    assert not native_dbar(ds, om)
    assert n0_closedness_predicate(ds, om)
    assert not n0_closedness_signed(ds, om)


def test_false_class_criterion_fixture():
    ds = deform_structure(solvable_holomorphic(), solvable_phi())
    om = top_form(3)
    assert not maurer_cartan(ds.base, ds.phi)
    assert not d_component(ds.base, om, Part.MUBAR)
    assert not d_component(ds.base, om, Part.DELBAR)
    assert dolbeault_class_predicate(ds, om) is False
    assert native_dolbeault_class(ds, om) is False


def test_class_criterion_preconditions():
    ds = deform_structure(f2(), phi_t())
    with pytest.raises(PreconditionViolation) as exc:
        dolbeault_class_predicate(ds, top_form(3))
    assert exc.value.hypothesis == "mu_bar_closed"
    flat_fails = [b for b in random_beltramis(3, 5, seed=8) if maurer_cartan(f2(), b)]
    ds = deform_structure(f2(), flat_fails[0])
    with pytest.raises(PreconditionViolation) as exc:
        dolbeault_class_predicate(ds, top_form(3))
    assert exc.value.hypothesis == "maurer_cartan"
    with pytest.raises(MCViolation):
        n0_closedness_predicate(ds, top_form(3))


@pytest.mark.parametrize("spec", [f2(), f3(), sign_witness(), solvable_holomorphic()],
                         ids=lambda s: s.name)
def test_dual_route_agreement_single_entries(spec):
    om = top_form(3)
    tested = 0
    for i in range(1, 4):
        for j in range(1, 4):
            for c in (Scalar(1), Scalar(-1), Scalar(0, 1), Scalar(1, 1) / 2):
                b = single_entry(3, i, j, c)
                if maurer_cartan(spec, b):
                    continue
                try:
                    ds = deform_structure(spec, b)
                except SingularTransition:
                    continue
                tested += 1
                assert n0_closedness_predicate(ds, om) == (not native_dbar(ds, om))
                try:
                    pred = dolbeault_class_predicate(ds, om)
                except PreconditionViolation:
                    pass
                else:
                    assert pred == native_dolbeault_class(ds, om)
    assert tested


@pytest.mark.parametrize("spec", [f2(), f3(), kodaira_thurston()], ids=lambda s: s.name)
def test_nq_criterion_agrees_with_native(spec):
    n = spec.n
    for b in random_beltramis(n, 4, seed=6):
        ds = deform_structure(spec, b)
        for m in basis_masks(n):
            xi = Form.basis(m)
            if xi.bidegree()[0] == n:
                assert nq_closedness_predicate(ds, xi) == (not native_dbar(ds, xi))


@pytest.mark.parametrize("spec", [f2(), f3(), kodaira_thurston()], ids=lambda s: s.name)
def test_projection_identities(spec):
    n = spec.n
    for b in random_beltramis(n, 4, seed=12):
        ds = deform_structure(spec, b)
        for m in basis_masks(n):
            a = Form.basis(m)
            p, q = a.bidegree()
            if p == n or (p == n - 1 and q > 0):
                assert not any(projection_residuals(ds, a).values())


def test_signed_projection_fails_at_odd_n():
    ds = deform_structure(f2(), random_beltramis(3, 1, seed=12)[0])
    fails = [m for m in basis_masks(3, 3, 1)
             if signed_top_projection_residual(ds, Form.basis(m))]
    assert len(fails) == 3
    ds2 = deform_structure(kodaira_thurston(), random_beltramis(2, 1, seed=12)[0])
    assert not any(signed_top_projection_residual(ds2, Form.basis(m))
                   for m in basis_masks(2, 2, 1))


def test_integrable_reduction():
    spec = iwasawa()
    for b in random_beltramis(3, 3, seed=5):
        assert not integrable_reduction_residual(deform_structure(spec, b), top_form(3))
    with pytest.raises(PreconditionViolation):
        integrable_reduction_residual(deform_structure(f2(), phi_t()), top_form(3))
