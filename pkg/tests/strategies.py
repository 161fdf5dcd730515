"""Hypothesis strategies for scalars, forms and Beltrami differentials."""
from hypothesis import strategies as st

from almostcx import Form, Scalar
from almostcx.algebra import basis_masks
from almostcx.deformation import Beltrami

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
scalars = st.builds(Scalar, small, small)
nonzero_scalars = scalars.filter(bool)


def forms(n: int, max_terms: int = 4, degree: int | None = None):
    masks = [m for m in basis_masks(n) if degree is None or bin(m).count("1") == degree]
    return st.dictionaries(st.sampled_from(masks), scalars, max_size=max_terms).map(Form)


def beltramis(n: int):
    entry = st.builds(Scalar, st.fractions(-1, 1, max_denominator=3),
                      st.fractions(-1, 1, max_denominator=3))
    row = st.tuples(*[entry] * n)
    return st.tuples(*[row] * n).map(Beltrami)
