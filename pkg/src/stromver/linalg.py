"""Dense exact linear algebra over Q(i).

Matrices are lists of rows of :class:`GaussRational`; vectors are lists.
Sizes here never exceed a few hundred, so plain Gauss-Jordan elimination
is adequate.
"""

from __future__ import annotations

from typing import Sequence

from .errors import DimensionMismatch, SingularMetric
from .scalars import ONE, ZERO, GaussRational, gr

Matrix = list[list[GaussRational]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def as_matrix(rows) -> Matrix:
    return [[gr(x) for x in row] for row in rows]


def matmul(a: Sequence[Sequence[GaussRational]], b: Sequence[Sequence[GaussRational]]) -> Matrix:
    if not a:
        return []
    if len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0]) if b else 0}")
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        acc = out[i]
        for k, x in enumerate(row):
            if not x:
                continue
            for j, y in enumerate(b[k]):
                if y:
                    acc[j] = acc[j] + x * y
    return out


def matvec(a, v) -> list[GaussRational]:
    if a and len(a[0]) != len(v):
        raise DimensionMismatch("matrix/vector size mismatch")
    out = []
    for row in a:
        s = ZERO
        for x, y in zip(row, v):
            if x and y:
                s = s + x * y
        out.append(s)
    return out


def add(a, b) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a, b) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c, a) -> Matrix:
    c = gr(c)
    return [[c * x for x in row] for row in a]


def transpose(a) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def conj(a) -> Matrix:
    return [[x.conj() for x in row] for row in a]


def adjoint(a) -> Matrix:
    return transpose(conj(a))


def commutator(a, b) -> Matrix:
    return sub(matmul(a, b), matmul(b, a))


def trace(a) -> GaussRational:
    s = ZERO
    for i, row in enumerate(a):
        s = s + row[i]
    return s


def is_zero(a) -> bool:
    return all(not x for row in a for x in row)


def kron(a, b) -> Matrix:
    ra, ca, rb, cb = len(a), len(a[0]), len(b), len(b[0])
    out = zeros(ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            x = a[i][j]
            if not x:
                continue
            for k in range(rb):
                for l in range(cb):
                    if b[k][l]:
                        out[i * rb + k][j * cb + l] = x * b[k][l]
    return out


def block_diag(a, b) -> Matrix:
    n, m = len(a), len(b)
    out = zeros(n + m, n + m)
    for i in range(n):
        out[i][:n] = list(a[i])
    for i in range(m):
        out[n + i][n:] = list(b[i])
    return out


def rref(a) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (input is not modified)."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inv()
        m[r] = [x * inv if x else x for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a, cols: int | None = None) -> list[list[GaussRational]]:
    """Basis of ``{x : a x = 0}``; each vector has a 1 in its free column."""
    if cols is None:
        cols = len(a[0]) if a else 0
    if not a:
        return [[ONE if i == j else ZERO for i in range(cols)] for j in range(cols)]
    m, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for r, p in enumerate(pivots):
            if m[r][f]:
                v[p] = -m[r][f]
        basis.append(v)
    return basis


def row_space_basis(vectors) -> list[list[GaussRational]]:
    """Echelon basis of the span of ``vectors``."""
    vecs = [list(v) for v in vectors]
    if not vecs:
        return []
    m, pivots = rref(vecs)
    return m[: len(pivots)]


def det(a) -> GaussRational:
    n = len(a)
    m = [list(row) for row in a]
    result = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        piv = m[c][c]
        result = result * piv
        inv = piv.inv()
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(a) -> Matrix:
    n = len(a)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMetric("matrix is singular")
    return [row[n:] for row in m[:n]]


def solve_in_span(basis, target) -> list[GaussRational] | None:
    """Coefficients ``c`` with ``sum c_i basis_i == target``, or None."""
    if not basis:
        return [] if all(not x for x in target) else None
    k = len(basis)
    aug = [[basis[j][i] for j in range(k)] + [target[i]] for i in range(len(target))]
    m, pivots = rref(aug)
    if k in pivots:
        return None
    coeffs = [ZERO] * k
    for r, p in enumerate(pivots):
        coeffs[p] = m[r][k]
    return coeffs


def leading_minors(a) -> list[GaussRational]:
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]
