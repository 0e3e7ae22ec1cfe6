"""Complex Lie algebra data: sl(2,C), brackets, trace form, Hermitian form.

Structure constants are stored as ``structure[i][j][k] = c^k_ij`` with
``[e_i, e_j] = sum_k c^k_ij e_k``.  Lie elements are plain tuples of
coordinates in the basis ``e_0 .. e_{n-1}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Sequence

from . import linalg
from .errors import AlgebraViolation, DimensionMismatch, InvalidAlgebra
from .scalars import I, ONE, ZERO, GaussRational, gr

Vector = tuple[GaussRational, ...]

# 2x2 realization of the standard basis {A0, B0, C0}
A0 = ((ONE, ZERO), (ZERO, -ONE))
B0 = ((ZERO, ONE), (ZERO, ZERO))
C0 = ((ZERO, ZERO), (ONE, ZERO))


def _freeze(m) -> tuple:
    return tuple(tuple(row) for row in m)


@dataclass(frozen=True, eq=True)
class LieAlgebraData:
    dim: int
    structure: tuple  # structure[i][j][k] = c^k_ij
    labels: tuple[str, ...]
    realization: tuple | None = field(default=None, compare=False)
    name: str = field(default="custom", compare=False)

    def basis(self, i: int) -> Vector:
        return tuple(ONE if k == i else ZERO for k in range(self.dim))

    def zero(self) -> Vector:
        return (ZERO,) * self.dim

    def c(self, i: int, j: int, k: int) -> GaussRational:
        return self.structure[i][j][k]

    @cached_property
    def is_abelian(self) -> bool:
        return all(not x for a in self.structure for b in a for x in b)

    def realize(self, x: Sequence) -> linalg.Matrix:
        """Matrix image of ``x`` under the stored realization."""
        if self.realization is None:
            raise InvalidAlgebra(f"algebra {self.name!r} carries no matrix realization")
        size = len(self.realization[0])
        out = linalg.zeros(size, size)
        for coeff, mat in zip(x, self.realization):
            if coeff:
                out = linalg.add(out, linalg.scale(coeff, mat))
        return out

    def validate(self) -> None:
        """Raise :class:`AlgebraViolation` naming the first failed axiom."""
        n = self.dim
        c = self.structure
        if len(c) != n or any(len(row) != n or any(len(v) != n for v in row) for row in c):
            raise AlgebraViolation("schema", "structure constants must be dim x dim x dim")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if c[i][j][k] != -c[j][i][k]:
                        raise AlgebraViolation("antisymmetry", f"c^{k}_{i}{j} != -c^{k}_{j}{i}")
        res = jacobi_residuals(self)
        if res:
            (i, j, k, l), v = next(iter(res.items()))
            raise AlgebraViolation("jacobi", f"residual {v} at (i,j,k,l)=({i},{j},{k},{l})")
        for i in range(n):
            if sum((c[i][k][k] for k in range(n)), ZERO):
                raise AlgebraViolation("unimodularity", f"trace ad(e_{i}) != 0")


@dataclass(frozen=True)
class HermitianForm:
    """``h(x, y) = sum x_i conj(y_j) h_ij``: linear in the first slot."""

    matrix: tuple

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __call__(self, x: Sequence, y: Sequence) -> GaussRational:
        s = ZERO
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj and self.matrix[i][j]:
                    s = s + xi * yj.conj() * self.matrix[i][j]
        return s

    def entry(self, i: int, j: int) -> GaussRational:
        return self.matrix[i][j]

    def scaled(self, lam) -> "HermitianForm":
        lam = gr(lam)
        return HermitianForm(_freeze(linalg.scale(lam, self.matrix)))

    @cached_property
    def inverse(self) -> tuple:
        return _freeze(linalg.inverse(self.matrix))

    @cached_property
    def det(self) -> GaussRational:
        return linalg.det(self.matrix)

    @property
    def is_diagonal(self) -> bool:
        return all(not self.matrix[i][j] for i in range(self.dim) for j in range(self.dim) if i != j)

    def real_realization(self) -> list[list[Fraction]]:
        """Real symmetric 2n x 2n matrix of ``Re h`` on C^n = R^2n."""
        n = self.dim
        p = [[self.matrix[i][j].re for j in range(n)] for i in range(n)]
        q = [[self.matrix[i][j].im for j in range(n)] for i in range(n)]
        top = [p[i] + [-x for x in q[i]] for i in range(n)]
        bottom = [q[i] + p[i] for i in range(n)]
        return top + bottom

    def validate(self) -> None:
        n = self.dim
        for i in range(n):
            for j in range(n):
                if self.matrix[i][j] != self.matrix[j][i].conj():
                    raise AlgebraViolation("hermitian-symmetry", f"h[{i}][{j}] != conj(h[{j}][{i}])")
        real = linalg.as_matrix(self.real_realization())
        for k, minor in enumerate(linalg.leading_minors(real), start=1):
            if not (minor.is_real() and minor.re > 0):
                raise AlgebraViolation("positive-definite", f"leading minor {k} = {minor}")


@dataclass(frozen=True)
class DaggerMap:
    """Conjugate-linear map ``x -> D conj(x)``; for sl2 this is ``X -> -X^*``."""

    matrix: tuple

    def __call__(self, x: Sequence) -> Vector:
        return tuple(linalg.matvec(self.matrix, [v.conj() for v in x]))

    def validate(self, g: LieAlgebraData) -> None:
        n = g.dim
        for i in range(n):
            e = g.basis(i)
            if self(self(e)) != e:
                raise AlgebraViolation("dagger", f"dagger is not an involution on e_{i}")
        for i in range(n):
            for j in range(n):
                lhs = self(bracket(g, g.basis(i), g.basis(j)))
                rhs = bracket(g, self(g.basis(i)), self(g.basis(j)))
                if lhs != rhs:
                    raise AlgebraViolation("dagger", f"dagger is not a bracket automorphism on ({i},{j})")


# --- operations ---------------------------------------------------------------


def bracket(g: LieAlgebraData, x: Sequence, y: Sequence) -> Vector:
    if len(x) != g.dim or len(y) != g.dim:
        raise DimensionMismatch(f"expected vectors of length {g.dim}")
    out = [ZERO] * g.dim
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            f = xi * yj
            for k, c in enumerate(g.structure[i][j]):
                if c:
                    out[k] = out[k] + f * c
    return tuple(out)


def ad_matrix(g: LieAlgebraData, x: Sequence) -> linalg.Matrix:
    """Columns are ``[x, e_j]``."""
    cols = [bracket(g, x, g.basis(j)) for j in range(g.dim)]
    return linalg.transpose(cols)


def jacobi_residuals(g: LieAlgebraData) -> dict:
    """Nonzero Jacobi residuals keyed by ``(i, j, k, l)``."""
    n, c = g.dim, g.structure
    out = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    s = ZERO
                    for m in range(n):
                        s = s + c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l]
                    if s:
                        out[(i, j, k, l)] = s
    return out


def killing_form(g: LieAlgebraData, x: Sequence, y: Sequence) -> GaussRational:
    return linalg.trace(linalg.matmul(ad_matrix(g, x), ad_matrix(g, y)))


def trace_form(g: LieAlgebraData, x: Sequence, y: Sequence) -> GaussRational:
    """``trace(XY)`` in the matrix realization (Killing form if there is none)."""
    if g.realization is None:
        return killing_form(g, x, y)
    return linalg.trace(linalg.matmul(g.realize(x), g.realize(y)))


def gram(form, g: LieAlgebraData) -> linalg.Matrix:
    return [[form(g, g.basis(i), g.basis(j)) for j in range(g.dim)] for i in range(g.dim)]


def structure_from_matrices(mats: Sequence) -> tuple:
    """Structure constants of the span of linearly independent matrices."""
    n = len(mats)
    flat = [[x for row in m for x in row] for m in mats]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            comm = linalg.commutator(mats[i], mats[j])
            target = [x for r in comm for x in r]
            coeffs = linalg.solve_in_span(flat, target)
            if coeffs is None:
                raise AlgebraViolation("schema", "matrices do not span a Lie algebra")
            row.append(tuple(coeffs))
        out.append(tuple(row))
    return tuple(out)


@lru_cache(maxsize=None)
def sl2_standard() -> tuple[LieAlgebraData, HermitianForm, DaggerMap]:
    """sl(2,C) in the basis {A0, B0, C0}, with ``h0(X,Y) = trace(X Y^*)``."""
    mats = (A0, B0, C0)
    g = LieAlgebraData(
        dim=3,
        structure=structure_from_matrices(mats),
        labels=("A0", "B0", "C0"),
        realization=mats,
        name="sl2",
    )
    h = HermitianForm(
        tuple(tuple(linalg.trace(linalg.matmul(a, linalg.adjoint(b))) for b in mats) for a in mats)
    )
    # -X^* expressed in the basis, column by column
    dag_cols = []
    flat = [[x for row in m for x in row] for m in mats]
    for m in mats:
        neg_star = linalg.scale(-1, linalg.adjoint(m))
        dag_cols.append(linalg.solve_in_span(flat, [x for row in neg_star for x in row]))
    d = DaggerMap(_freeze(linalg.transpose(dag_cols)))
    g.validate()
    h.validate()
    d.validate(g)
    return g, h, d


def abelian(dim: int = 3) -> tuple[LieAlgebraData, HermitianForm, DaggerMap]:
    g = LieAlgebraData(
        dim=dim,
        structure=tuple(tuple((ZERO,) * dim for _ in range(dim)) for _ in range(dim)),
        labels=tuple(f"E{i}" for i in range(dim)),
        name="abelian",
    )
    eye = _freeze(linalg.identity(dim))
    return g, HermitianForm(eye), DaggerMap(eye)


def is_sl2(g: LieAlgebraData) -> bool:
    std, _, _ = sl2_standard()
    return g.dim == 3 and g.structure == std.structure


def su2_generators(g: LieAlgebraData) -> tuple[Vector, Vector, Vector]:
    """Real basis of su(2) inside sl(2,C): ``iA0, B0 - C0, i(B0 + C0)``.

    They satisfy ``[u1,u2] = 2u3``, ``[u2,u3] = 2u1``, ``[u3,u1] = 2u2``.
    """
    if not is_sl2(g):
        raise InvalidAlgebra("su(2) generators are only defined for the standard sl(2,C)")
    return (
        (I, ZERO, ZERO),
        (ZERO, ONE, -ONE),
        (ZERO, I, I),
    )


# su(2) structure in the generator basis: [u_a, u_b] = sum_c SU2_STRUCTURE[a][b][c] u_c
SU2_STRUCTURE = {
    (0, 1): (0, 0, 2),
    (1, 2): (2, 0, 0),
    (2, 0): (0, 2, 0),
}


def h_ad_residuals(g: LieAlgebraData, h: HermitianForm, u: Sequence) -> dict:
    """Nonzero ``h([u,x],y) + h(x,[u,y])`` over basis pairs."""
    out = {}
    for i in range(g.dim):
        for j in range(g.dim):
            x, y = g.basis(i), g.basis(j)
            r = h(bracket(g, u, x), y) + h(x, bracket(g, u, y))
            if r:
                out[(i, j)] = r
    return out


# --- JSON descriptor -----------------------------------------------------------


def load_algebra(source) -> tuple[LieAlgebraData, HermitianForm, DaggerMap]:
    """Load ``{"dim", "structure": [[i,j,k,"c"],...], "hermitian": [[...]]}``.

    Entries not listed are zero; listing ``[i,j,k,c]`` also sets
    ``c^k_ji = -c`` unless that entry is given explicitly. Optional keys:
    ``"labels"``, ``"dagger"`` (matrix; defaults to coordinate conjugation).
    """
    if isinstance(source, (str, Path)) and not str(source).lstrip().startswith("{"):
        data = json.loads(Path(source).read_text())
    elif isinstance(source, (str, bytes)):
        data = json.loads(source)
    else:
        data = source
    try:
        n = int(data["dim"])
        if n <= 0:
            raise AlgebraViolation("schema", "dim must be positive")
        c = [[[None] * n for _ in range(n)] for _ in range(n)]
        for entry in data.get("structure", []):
            i, j, k, val = entry
            c[i][j][k] = gr(val)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if c[i][j][k] is None:
                        c[i][j][k] = -c[j][i][k] if c[j][i][k] is not None else ZERO
        herm = data.get("hermitian")
        h = HermitianForm(_freeze(linalg.as_matrix(herm))) if herm is not None else HermitianForm(
            _freeze(linalg.identity(n))
        )
        labels = tuple(data.get("labels") or (f"E{i}" for i in range(n)))
        dag = data.get("dagger")
        d = DaggerMap(_freeze(linalg.as_matrix(dag) if dag is not None else linalg.identity(n)))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, AlgebraViolation):
            raise
        raise AlgebraViolation("schema", str(exc)) from exc
    g = LieAlgebraData(dim=n, structure=_freeze([_freeze(r) for r in c]), labels=labels, name=data.get("name", "custom"))
    if g.structure == sl2_standard()[0].structure and g.dim == 3:
        g = sl2_standard()[0]
    if h.dim != n:
        raise AlgebraViolation("schema", "hermitian matrix has wrong size")
    g.validate()
    h.validate()
    d.validate(g)
    return g, h, d
