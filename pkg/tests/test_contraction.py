import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from almostcx import Form, Scalar, VectorField, VectorForm, interior
from almostcx.algebra import OFFSET, basis_masks
from almostcx.contraction import (
    abc_decompose, anticommutation_residual, contract, contract_general, evaluate,
    exp_contraction, fn_bracket, fn_bracket_collected, fn_bracket_three_term,
)
from almostcx.deformation import random_beltramis
from almostcx.errors import NonBeltramiInput, TypeLeak
from almostcx.fixtures import f2, f3, phi_t, torus, valid_frames

from strategies import forms

t1, t2, t3 = (Form.coframe(k) for k in (1, 2, 3))
b1, b2, b3 = (Form.coframe(k, True) for k in (1, 2, 3))


def e(k, bar=False):
    return VectorField.basis(k, bar)


def vf(form, k, bar=False):
    return VectorForm.tensor(form, e(k, bar))


def test_interior_examples():
    assert interior(e(1), t1) == Form.constant(1)
    assert not interior(e(1), b2)
    assert interior(e(1), t1 ^ t2) == t2
    assert interior(e(2, True), t1 ^ b2) == -t1


def test_contract_examples():
    rho = vf(b1, 1)
    assert contract(rho, t1) == b1
    assert contract(rho, t1 ^ t2) == (b1 ^ t2)
    assert contract(rho, t1 ^ t2) == -(t2 ^ b1)
    assert not contract(VectorForm.zero(), t1 ^ t2)


def test_contract_general_examples():
    rho = vf(b1, 1)
    assert contract_general(rho, t1 ^ t2) == contract(rho, t1 ^ t2)
    assert not contract_general(VectorForm.zero(), t1)


def test_evaluate_uses_determinant_convention():
    assert evaluate(t1 ^ t2, [e(1), e(2)]) == Scalar(1)
    assert evaluate(t1 ^ t2, [e(2), e(1)]) == Scalar(-1)


@pytest.mark.parametrize("n", [2, 3])
def test_identity_counts_degree(n):
    Iv = VectorForm.identity(n)
    for m in basis_masks(n):
        a = Form.basis(m)
        assert contract(Iv, a) == a.scale(a.degree())


def test_exhaustive_contraction_coherence_n3():
    n = 3
    positions = list(range(n)) + [OFFSET + k for k in range(n)]
    words = [m for m in basis_masks(n) if bin(m).count("1") <= 2]
    targets = [Form.basis(m) for m in basis_masks(n)]
    mismatches = 0
    for m in words:
        for p in positions:
            rho = VectorForm._wrap({(m, p): Scalar(1)})
            for a in targets:
                mismatches += contract(rho, a) != contract_general(rho, a)
    assert mismatches == 0


@given(forms(3, max_terms=3, degree=1), st.integers(0, 5), forms(3, max_terms=4))
def test_contraction_coherence_random(eta, pos, a):
    p = pos if pos < 3 else OFFSET + pos - 3
    rho = VectorForm.tensor(eta, VectorField._wrap({p: Scalar(1)}))
    assert contract(rho, a) == contract_general(rho, a)


@given(st.integers(0, 5), forms(3, degree=2), forms(3))
def test_interior_antiderivation(pos, a, b):
    p = pos if pos < 3 else OFFSET + pos - 3
    X = VectorField._wrap({p: Scalar(1)})
    assert interior(X, a ^ b) == (interior(X, a) ^ b) + (a ^ interior(X, b))
    c = t1 + b2
    assert interior(X, c ^ b) == (interior(X, c) ^ b) - (c ^ interior(X, b))


def test_exp_contraction():
    phi = phi_t().vector_form
    assert exp_contraction(VectorForm.zero(), t1 ^ t2) == (t1 ^ t2)
    assert exp_contraction(phi, t1) == t1 + b1.scale(Scalar(1, 0) / 2)
    with pytest.raises(NonBeltramiInput):
        exp_contraction(vf(t1, 1), t1)


@pytest.mark.parametrize("b", random_beltramis(3, 5, seed=11), ids=repr)
def test_exp_contraction_inverse(b):
    v = b.vector_form
    for m in basis_masks(3):
        a = Form.basis(m)
        assert exp_contraction(-v, exp_contraction(v, a)) == a


def test_anticommutation_examples():
    phi, psi = phi_t().vector_form, vf(b2, 3)
    assert not anticommutation_residual(phi, phi, t1 ^ t2 ^ t3)
    assert not anticommutation_residual(phi, psi, t1)
    rng = random.Random(3)
    for b, c in zip(random_beltramis(3, 4, 1), random_beltramis(3, 4, 2)):
        a = Form.basis(rng.choice(basis_masks(3)))
        assert not anticommutation_residual(b.vector_form, c.vector_form, a)


def test_bracket_examples():
    assert not fn_bracket(torus(3), vf(b1, 1), vf(b2, 3))
    phi = phi_t().vector_form
    assert not fn_bracket(f2(), phi, phi)
    assert abc_decompose(fn_bracket(f2(), phi, phi)) == (VectorForm.zero(),) * 3
    assert abc_decompose(VectorForm.zero()) == (VectorForm.zero(),) * 3
    phi, psi = vf(b2, 1), vf(b3, 2)
    assert fn_bracket(f2(), phi, psi) == fn_bracket_three_term(f2(), phi, psi)


@pytest.mark.parametrize("spec", valid_frames(), ids=lambda s: s.name)
def test_bracket_formulas_agree(spec):
    bs = random_beltramis(spec.n, 4, seed=5)
    for b, c in zip(bs, bs[1:]):
        phi, psi = b.vector_form, c.vector_form
        five = fn_bracket(spec, phi, psi)
        assert five == fn_bracket_collected(spec, phi, psi)
        assert five == fn_bracket_three_term(spec, phi, psi)
        assert five == fn_bracket(spec, psi, phi)
        abc_decompose(five)


def test_type_leak_is_reported():
    with pytest.raises(TypeLeak):
        abc_decompose(vf(t1, 1))


def test_bracket_on_f3_has_all_three_types():
    A, B, C = abc_decompose(fn_bracket(f3(), vf(b1, 1), vf(b2, 2)))
    assert A or B or C
