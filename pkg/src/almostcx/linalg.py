"""Dense exact matrices over Gaussian rationals.

Matrices are tuples of row tuples of ``Scalar``.  Everything is sized for
n ≤ 4 frames (at most 70 basis words per bidegree), so plain Gauss–Jordan
elimination with exact arithmetic is more than fast enough.
"""
from __future__ import annotations

from typing import Sequence

from .scalar import ONE, ZERO, Scalar

Matrix = tuple[tuple[Scalar, ...], ...]


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Scalar.coerce(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(r: int, c: int | None = None) -> Matrix:
    c = r if c is None else c
    return tuple((ZERO,) * c for _ in range(r))


def shape(A: Matrix) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if A and B and len(A[0]) != len(B):
        raise ValueError("shape mismatch in matmul")
    cols = list(zip(*B)) if B else []
    out = []
    for row in A:
        r = []
        for col in cols:
            s = ZERO
            for x, y in zip(row, col):
                if x and y:
                    s = s + x * y
            r.append(s)
        out.append(tuple(r))
    return tuple(out)


def add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(A, B))


def sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(A, B))


def neg(A: Matrix) -> Matrix:
    return tuple(tuple(-x for x in r) for r in A)


def conj(A: Matrix) -> Matrix:
    """Entrywise complex conjugate (no transpose)."""
    return tuple(tuple(x.conj() for x in r) for r in A)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A)) if A else ()


def adjoint(A: Matrix) -> Matrix:
    return transpose(conj(A))


def is_zero(A: Matrix) -> bool:
    return not any(x for r in A for x in r)


def block(A: Matrix, B: Matrix, C: Matrix, D: Matrix) -> Matrix:
    """[[A, B], [C, D]]."""
    top = tuple(ra + rb for ra, rb in zip(A, B))
    bot = tuple(rc + rd for rc, rd in zip(C, D))
    return top + bot


def split_blocks(M: Matrix, n: int) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    A = tuple(r[:n] for r in M[:n])
    B = tuple(r[n:] for r in M[:n])
    C = tuple(r[:n] for r in M[n:])
    D = tuple(r[n:] for r in M[n:])
    return A, B, C, D


def det(A: Matrix) -> Scalar:
    n = len(A)
    M = [list(r) for r in A]
    d = ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        p = M[c][c]
        d = d * p
        inv = p.inverse()
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return d


def inverse(A: Matrix) -> Matrix:
    """Gauss–Jordan inverse; raises ZeroDivisionError when singular."""
    n = len(A)
    M = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = M[c][c].inverse()
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return tuple(tuple(r[n:]) for r in M)


def rref(rows: Sequence[Sequence[Scalar]], ncols: int | None = None):
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in rows]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return [tuple(row) for row in M[:r]], pivots


def rank(rows: Sequence[Sequence[Scalar]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(A: Matrix, ncols: int | None = None) -> list[tuple[Scalar, ...]]:
    """Basis of {x : A x = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return [tuple(ONE if j == i else ZERO for j in range(ncols)) for i in range(ncols)]
    R, pivots = rref(A, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def row_space_basis(rows: Sequence[Sequence[Scalar]], ncols: int) -> list[tuple[Scalar, ...]]:
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    return rref(rows, ncols)[0]
