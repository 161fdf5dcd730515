import pytest
from hypothesis import assume, given

from almostcx import Form, Part, Scalar, VectorForm, exterior_d
from almostcx import linalg as la
from almostcx.algebra import basis_masks
from almostcx.contraction import Connection, fn_bracket
from almostcx.deformation import (
    HALF, Beltrami, block_identity_residuals, build_transition, commutators_with_parts,
    compatibility_antisymmetry, composition_residuals, conjugated_d_residual,
    decomposed_extension_residual, deform_structure, duality_residual, exp_pair,
    extension_residual, finv_additivity_witness, generator_residuals, maurer_cartan,
    maurer_cartan_extracted, o_chain, power_commutator_residual, random_beltramis,
    real_operator_residual, o_chain_part_residual, o_chain_residual, type_residual,
)
from almostcx.errors import SingularTransition
from almostcx.fixtures import f2, f3, kodaira_thurston, phi_t, single_entry, torus

from strategies import beltramis

t1, t2, t3 = (Form.coframe(k) for k in (1, 2, 3))
b1, b2, b3 = (Form.coframe(k, True) for k in (1, 2, 3))


def test_zero_beltrami_is_trivial():
    spec = f2()
    phi = Beltrami.zero(3)
    T = build_transition(phi)
    assert T.Phi == la.identity(6) and T.PhiInv == la.identity(6)
    ds = deform_structure(spec, phi)
    assert ds.spec_phi.dtheta == spec.dtheta
    assert not maurer_cartan(spec, phi)
    for m in basis_masks(3):
        a = Form.basis(m)
        assert exp_pair(ds, a) == a
        assert o_chain(ds, a) == exterior_d(spec, a)


def test_singular_transition():
    with pytest.raises(SingularTransition):
        deform_structure(f2(), phi_t(t=1))


def test_f2_phi_t_worked_values():
    ds = deform_structure(f2(), phi_t())
    assert ds.coframe_phi[0] == t1 + b1.scale(HALF)
    assert exp_pair(ds, t1 ^ t2 ^ t3) == ((t1 + b1.scale(HALF)) ^ t2 ^ t3)
    assert not fn_bracket(f2(), phi_t().vector_form, phi_t().vector_form)
    assert not maurer_cartan(f2(), phi_t())


def test_torus_maurer_cartan_vanishes():
    for b in random_beltramis(3, 5, seed=1):
        assert not maurer_cartan(torus(3), b)


def test_maurer_cartan_two_routes_on_f2():
    spec = f2()
    phi = single_entry(3, 2, 2)
    mc2, leftover = maurer_cartan_extracted(spec, phi)
    assert maurer_cartan(spec, phi) == mc2
    assert not leftover


@pytest.mark.parametrize("spec", [f2(), f3(), kodaira_thurston()], ids=lambda s: s.name)
def test_maurer_cartan_two_routes_random(spec):
    for b in random_beltramis(spec.n, 5, seed=2):
        mc2, leftover = maurer_cartan_extracted(spec, b)
        assert maurer_cartan(spec, b) == mc2 and not leftover


def test_power_commutator_k2_on_f2():
    conn = Connection.trivial(f2())
    for b in random_beltramis(3, 3, seed=4):
        for m in basis_masks(3, max_degree=3):
            assert not power_commutator_residual(conn, b, 2, Form.basis(m))


def test_mubar_part_on_f2_phi_t():
    assert not decomposed_extension_residual(f2(), phi_t(), Part.MUBAR, t1)


def test_compatibility_condition():
    P = single_entry(3, 1, 2, 1).entries
    anti = Beltrami(la.sub(P, la.transpose(P)))
    assert compatibility_antisymmetry(anti)
    assert not compatibility_antisymmetry(single_entry(3, 1, 1, HALF))


def test_finv_is_not_additive():
    whole, split = finv_additivity_witness(3)
    assert whole != split


def test_duality_and_blocks_f3():
    for b in random_beltramis(3, 5, seed=9):
        ds = deform_structure(f3(), b)
        assert la.is_zero(duality_residual(ds))
        assert all(la.is_zero(r) for r in block_identity_residuals(ds.transition, b).values())
        assert not any(generator_residuals(ds).values())


def _small_transition(phi):
    try:
        return deform_structure(kodaira_thurston(), phi)
    except SingularTransition:
        assume(False)


@given(beltramis(2))
def test_extended_operator_properties(phi):
    ds = _small_transition(phi)
    for m in basis_masks(2):
        a = Form.basis(m)
        assert not any(composition_residuals(ds, a).values())
        assert not type_residual(ds, a)
        assert not real_operator_residual(ds, a)


@given(beltramis(2))
def test_exterior_derivative_through_o_chain(phi):
    ds = _small_transition(phi)
    for m in basis_masks(2):
        a = Form.basis(m)
        assert not o_chain_residual(ds, a)
        for P in Part:
            assert not o_chain_part_residual(ds, a, P)


@given(beltramis(2))
def test_conjugation_formulas(phi):
    spec = kodaira_thurston()
    assume(not la.is_zero(phi.entries))
    conn = Connection(spec, ((t1,),))
    for m in basis_masks(2):
        a = Form.basis(m)
        assert not extension_residual(conn, phi, a)
        assert not conjugated_d_residual(spec, phi, a)
        assert not any(commutators_with_parts(spec, phi, a).values())
        for P in Part:
            assert not decomposed_extension_residual(spec, phi, P, a)
