"""Small frames and Beltrami differentials used by tests, suites and manifests."""
from __future__ import annotations

from .algebra import Form
from .deformation import HALF, Beltrami
from .frame import FrameSpec
from .scalar import I, ZERO, Scalar


def _t(k: int, bar: bool = False) -> Form:
    return Form.coframe(k, bar)


def torus(n: int = 2) -> FrameSpec:
    """Abelian frame: every dθ^γ vanishes."""
    return FrameSpec.abelian(n, name=f"F0_n{n}")


def f2() -> FrameSpec:
    """n=3, dθ¹ = θ²̄∧θ³̄; a maximally non-integrable structure."""
    return FrameSpec(3, (_t(2, True) ^ _t(3, True), Form.zero(), Form.zero()), name="F2")


def f3() -> FrameSpec:
    """n=3 with every type present in the structure data."""
    d3 = (_t(1) ^ _t(2)) + (_t(1) ^ _t(2, True)) + (_t(1, True) ^ _t(2, True))
    return FrameSpec(3, (Form.zero(), _t(1) ^ _t(1, True), d3), name="F3")


def kodaira_thurston() -> FrameSpec:
    """Non-integrable almost complex structure on a 4-dimensional nilmanifold."""
    x = _t(1) + _t(1, True)
    y = _t(2) + _t(2, True)
    return FrameSpec(2, (Form.zero(), (x ^ y).scale(I)), name="KT")


def kodaira_thurston_integrable() -> FrameSpec:
    return FrameSpec(2, (Form.zero(), _t(1) ^ _t(1, True)), name="KT_int")


def iwasawa() -> FrameSpec:
    """Holomorphically parallelizable: dθ³ = θ¹∧θ²."""
    return FrameSpec(3, (Form.zero(), Form.zero(), _t(1) ^ _t(2)), name="Iwasawa")


def broken_d_squared() -> FrameSpec:
    """dθ¹ = θ¹̄∧θ²̄ at n=2, which fails d² = 0: d(dθ¹) = θ¹∧θ²∧θ²̄."""
    return FrameSpec(2, (_t(1, True) ^ _t(2, True), Form.zero()), name="broken")


def solvable_holomorphic() -> FrameSpec:
    """n=3, dθ² = iθ¹∧θ² + θ¹∧θ³: integrable, with a MC-flat φ failing the (n,0) class criterion."""
    return FrameSpec(3, (Form.zero(), (_t(1) ^ _t(2)).scale(I) + (_t(1) ^ _t(3)), Form.zero()),
                     name="solvable")


def sign_witness() -> FrameSpec:
    """n=3, dθ² = -θ¹̄∧θ³̄ + iθ²∧θ³̄; μ̄ is nonzero on the top holomorphic form."""
    d2 = -(_t(1, True) ^ _t(3, True)) + (_t(2) ^ _t(3, True)).scale(I)
    return FrameSpec(3, (Form.zero(), d2, Form.zero()), name="sign_witness")


def phi_t(n: int = 3, t=HALF) -> Beltrami:
    """t·θ¹̄⊗e₁."""
    t = Scalar.coerce(t)
    rows = tuple(tuple(t if (i, j) == (0, 0) else ZERO for j in range(n)) for i in range(n))
    return Beltrami(rows, name="phi_t")


def single_entry(n: int, i: int, j: int, c=1, name: str = "") -> Beltrami:
    """c·θ^{j̄}⊗e_i (1-based indices)."""
    c = Scalar.coerce(c)
    rows = tuple(tuple(c if (r, s) == (i - 1, j - 1) else ZERO for s in range(n)) for r in range(n))
    return Beltrami(rows, name=name or f"{c}*theta{j}bar@e{i}")


def solvable_phi() -> Beltrami:
    """θ³̄⊗e₁ on ``solvable_holomorphic``."""
    return single_entry(3, 1, 3, name="theta3bar@e1")


def sign_witness_phi() -> Beltrami:
    """iθ²̄⊗e₁ on ``sign_witness``: MC-flat and e^{i_φ|i_φ̄}θ¹²³ is ∂̄_φ-closed."""
    return single_entry(3, 1, 2, I, name="i*theta2bar@e1")


def valid_frames() -> list[FrameSpec]:
    return [torus(2), torus(3), f2(), f3(), kodaira_thurston(), kodaira_thurston_integrable(),
            iwasawa(), solvable_holomorphic(), sign_witness()]


def top_form(n: int) -> Form:
    """θ¹∧⋯∧θⁿ."""
    return Form.basis((1 << n) - 1)
