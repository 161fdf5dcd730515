"""Exhaustive searches for the regression witnesses used as fixtures.

  python3 scripts/search_witnesses.py d2       first single-term table with d² ≠ 0 at n=2
  python3 scripts/search_witnesses.py sign     frame where the (-1)^n variant of the (n,0)
                                               criterion disagrees with native ∂̄_φ
  python3 scripts/search_witnesses.py class    frame where the (n,0) class criterion is false
                                               with its preconditions met
"""
import sys
from itertools import combinations

from almostcx import Form, Part, Scalar, d_component, validate_frame
from almostcx.algebra import basis_masks
from almostcx.cohomology import (
    dolbeault_class_predicate, n0_closedness_predicate, n0_closedness_signed, native_dbar,
    native_dolbeault_class,
)
from almostcx.deformation import deform_structure, maurer_cartan
from almostcx.errors import PreconditionViolation, SingularTransition
from almostcx.fixtures import single_entry, top_form
from almostcx.frame import FrameSpec

COEFFS = (Scalar(1), Scalar(-1), Scalar(0, 1), Scalar(0, -1))
PHI_VALUES = (Scalar(1), Scalar(-1), Scalar(0, 1), Scalar(1, 1) / 2)


def two_masks(n):
    return [m for m in basis_masks(n) if bin(m).count("1") == 2]


def search_d2():
    n = 2
    for g in range(n):
        for m in two_masks(n):
            dt = [Form.zero()] * n
            dt[g] = Form.basis(m)
            spec = FrameSpec(n, tuple(dt))
            rep = validate_frame(spec)
            if not rep.passed:
                return spec, rep.first_failure()
    return None


def tables(n, gamma, max_terms=2):
    """Structure data with one nonzero dθ^γ of up to max_terms terms."""
    masks = two_masks(n)
    for k in range(1, max_terms + 1):
        for ms in combinations(masks, k):
            for cs in _coeff_tuples(k):
                f = Form.zero()
                for m, c in zip(ms, cs):
                    f = f + Form.basis(m).scale(c)
                dt = [Form.zero()] * n
                dt[gamma] = f
                spec = FrameSpec(n, tuple(dt))
                if validate_frame(spec).passed:
                    yield spec


def _coeff_tuples(k):
    if k == 0:
        yield ()
        return
    for rest in _coeff_tuples(k - 1):
        for c in COEFFS[:2] if k == 1 else COEFFS:
            yield (c,) + rest


def mc_flat(spec):
    n = spec.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for c in PHI_VALUES:
                phi = single_entry(n, i, j, c)
                if maurer_cartan(spec, phi):
                    continue
                try:
                    yield deform_structure(spec, phi)
                except SingularTransition:
                    continue


def search_sign(n=3):
    om = top_form(n)
    for gamma in range(n):
        for spec in tables(n, gamma):
            if not d_component(spec, om, Part.MUBAR):
                continue
            for ds in mc_flat(spec):
                native = not native_dbar(ds, om)
                assert n0_closedness_predicate(ds, om) == native
                if n0_closedness_signed(ds, om) != native:
                    return spec, ds.phi, native
    return None


def search_class(n=3):
    om = top_form(n)
    for gamma in range(n):
        for spec in tables(n, gamma):
            for ds in mc_flat(spec):
                try:
                    pred = dolbeault_class_predicate(ds, om)
                except PreconditionViolation:
                    break
                assert pred == native_dolbeault_class(ds, om)
                if not pred:
                    return spec, ds.phi
    return None


def main(argv):
    which = argv[1] if len(argv) > 1 else "d2"
    found = {"d2": search_d2, "sign": search_sign, "class": search_class}[which]()
    if found is None:
        print("no witness found")
        return 1
    spec, *rest = found
    print("dθ =", ", ".join(str(f) for f in spec.dtheta))
    for r in rest:
        print(" ", r)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
