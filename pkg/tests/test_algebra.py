from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from almostcx import Form, I, ONE, Scalar, ZERO, conjugate, project
from almostcx.algebra import antihol, hol, homogeneous_parts, sort_word, total
from almostcx.errors import IndexOutOfRange

from strategies import forms, nonzero_scalars, scalars

t1, t2, t3 = (Form.coframe(k) for k in (1, 2, 3))
b1, b2, b3 = (Form.coframe(k, True) for k in (1, 2, 3))


# scalars

def test_scalar_arithmetic_is_exact():
    a = Scalar(Fraction(1, 3), 2)
    assert a + a.conj() == Scalar(Fraction(2, 3))
    assert a * a.inverse() == ONE
    assert I * I == -ONE
    assert (I ** 4) == ONE
    assert Scalar(1, 1) / 2 == Scalar(Fraction(1, 2), Fraction(1, 2))
    assert a.norm2() == Fraction(1, 9) + 4


def test_scalar_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@given(scalars, scalars, scalars)
def test_scalar_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a * a.conj()).is_real()


@given(nonzero_scalars)
def test_scalar_inverse(a):
    assert a * a.inverse() == ONE


# wedge and sign normalisation

def test_wedge_examples():
    assert not (t1 ^ t1)
    assert (t1 ^ t2) == Form.word(hol(1), hol(2))
    assert (t2 ^ t1) == -(t1 ^ t2)
    lhs = (t1 + b2) ^ (t2 + b1)
    rhs = (t1 ^ t2) + (t1 ^ b1) - (t2 ^ b2) - (b1 ^ b2)
    assert lhs == rhs


def test_sort_word_sign():
    assert sort_word([hol(2), hol(1)])[1] == -1
    assert sort_word([hol(1), hol(1)])[1] == 0
    assert sort_word([antihol(1), hol(1)])[1] == -1


@pytest.mark.parametrize("word", list(permutations([hol(1), antihol(2), hol(3), antihol(1)])))
def test_permuted_word_carries_sign(word):
    canonical = Form.word(hol(1), hol(3), antihol(1), antihol(2))
    sign = 1
    w = list(word)
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            if (w[i].bar, w[i].k) > (w[j].bar, w[j].k):
                sign = -sign
    assert Form.word(*word) == canonical.scale(sign)


def test_repeated_index_is_zero():
    assert not Form.word(hol(1), antihol(2), hol(1))


def test_range_check():
    a = Form.coframe(4)
    with pytest.raises(IndexOutOfRange):
        a.check_range(3)


@given(forms(3), forms(3), forms(3))
def test_wedge_associative(a, b, c):
    assert ((a ^ b) ^ c) == (a ^ (b ^ c))


@given(forms(3, degree=1), forms(3, degree=2), forms(3, degree=3))
def test_wedge_graded_commutative(a, b, c):
    assert (a ^ b) == (b ^ a)
    assert (a ^ c) == -(c ^ a)
    assert not (a ^ a)


@given(forms(3), forms(3), scalars)
def test_wedge_bilinear(a, b, c):
    assert (a.scale(c) ^ b) == (a ^ b).scale(c)
    assert ((a + b) ^ b) == (a ^ b) + (b ^ b)


# conjugation and projection

def test_conjugate_examples():
    assert conjugate(t1) == b1
    assert conjugate(t1.scale(I)) == b1.scale(-I)
    assert conjugate(t1 ^ b2) == (b1 ^ t2)


def test_project_example():
    assert project((t1 ^ b2) + (t1 ^ t2), 1, 1) == (t1 ^ b2)


@given(forms(3, max_terms=6))
def test_conjugation_involution(a):
    assert conjugate(conjugate(a)) == a
    for (p, q), part in homogeneous_parts(a).items():
        assert conjugate(part).bidegree() == (q, p)
        assert conjugate(project(a, p, q)) == project(conjugate(a), q, p)


@given(forms(3, max_terms=6))
def test_projection_resolves_identity(a):
    parts = [project(a, p, q) for p in range(4) for q in range(4)]
    assert total(parts) == a
    for p in range(4):
        for q in range(4):
            assert project(project(a, p, q), p, q) == project(a, p, q)


@given(forms(3), forms(3))
def test_conjugate_is_multiplicative(a, b):
    assert conjugate(a ^ b) == (conjugate(a) ^ conjugate(b))
