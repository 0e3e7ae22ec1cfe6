"""Invariant Hermitian connections on the holomorphic tangent bundle.

A connection is recorded by constant coefficients in the right-invariant
holomorphic frame ``e_0 .. e_{n-1}``::

    nabla_{e_i} e_j    = sum_k gamma10[i][j][k] e_k
    nabla_{ebar_i} e_j = sum_k gamma01[i][j][k] e_k

and is extended to the complexified tangent bundle by conjugation.  The
connection matrix of 1-forms is ``theta[k][j] = sum_i gamma10[i][j][k]
sigma^i + gamma01[i][j][k] sigma-bar^i`` and the curvature is
``R = d theta + theta ^ theta``.  The complexified frame ``E_a`` lists
``e_0..e_{n-1}`` followed by ``ebar_0..ebar_{n-1}``; brackets between frame
fields follow :meth:`Coframe.frame_bracket`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from typing import Sequence

from . import linalg
from .errors import SingularMetric
from .forms import (
    Coframe,
    InvariantForm,
    ce_differential,
    conjugate,
    kaehler_form,
    to_json as form_to_json,
    wedge,
)
from .lie import DaggerMap, HermitianForm
from .scalars import I, ZERO, GaussRational, gr

Tensor3 = list  # nested [a][b][c]


def _zeros3(n: int) -> list:
    return [[[ZERO] * n for _ in range(n)] for _ in range(n)]


def _freeze3(t) -> tuple:
    return tuple(tuple(tuple(x) for x in row) for row in t)


@dataclass(frozen=True)
class InvariantConnection:
    frame: Coframe
    gamma10: tuple
    gamma01: tuple
    kind: str = "custom"

    @property
    def n(self) -> int:
        return self.frame.n

    @cached_property
    def theta(self) -> tuple:
        n, F = self.n, self.frame
        rows = []
        for k in range(n):
            row = []
            for j in range(n):
                terms = {}
                for i in range(n):
                    if self.gamma10[i][j][k]:
                        terms[(i,)] = self.gamma10[i][j][k]
                    if self.gamma01[i][j][k]:
                        terms[(n + i,)] = self.gamma01[i][j][k]
                row.append(InvariantForm(F, terms))
            rows.append(tuple(row))
        return tuple(rows)

    def gamma_matrix(self, a: int) -> linalg.Matrix:
        """Matrix of ``nabla_{E_a}`` on the holomorphic frame (column j = image of e_j)."""
        n = self.n
        src = self.gamma10[a] if a < n else self.gamma01[a - n]
        return [[src[j][k] for j in range(n)] for k in range(n)]

    def covariant(self, a: int, b: int) -> list[GaussRational]:
        """``nabla_{E_a} E_b`` on the complexified frame."""
        n = self.n
        out = [ZERO] * (2 * n)
        if b < n:
            col = self.gamma10[a][b] if a < n else self.gamma01[a - n][b]
            for k in range(n):
                out[k] = col[k]
        else:
            # nabla_X ebar_j = conj(nabla_{conj X} e_j)
            j = b - n
            col = self.gamma01[a][j] if a < n else self.gamma10[a - n][j]
            for k in range(n):
                out[n + k] = col[k].conj()
        return out

    def scaled(self, t, kind: str | None = None) -> "InvariantConnection":
        t = gr(t)
        g10 = _freeze3([[[t * x for x in col] for col in row] for row in self.gamma10])
        g01 = _freeze3([[[t * x for x in col] for col in row] for row in self.gamma01])
        return InvariantConnection(self.frame, g10, g01, kind or self.kind)


def zero_connection(frame: Coframe, kind: str = "custom") -> InvariantConnection:
    z = _freeze3(_zeros3(frame.n))
    return InvariantConnection(frame, z, z, kind)


def connection_from_theta(frame: Coframe, theta, kind: str = "custom") -> InvariantConnection:
    n = frame.n
    g10, g01 = _zeros3(n), _zeros3(n)
    for k in range(n):
        for j in range(n):
            for i in range(n):
                g10[i][j][k] = theta[k][j].coefficient((i,))
                g01[i][j][k] = theta[k][j].coefficient((n + i,))
    return InvariantConnection(frame, _freeze3(g10), _freeze3(g01), kind)


def metric_residual(conn, h: HermitianForm) -> list[list[InvariantForm]]:
    """``theta^T H + H conj(theta)``: zero iff the connection preserves ``h``."""
    theta = conn.theta
    r = len(theta)
    F = conn.frame
    out = []
    for j in range(r):
        row = []
        for l in range(r):
            acc = F.zero()
            for k in range(r):
                if h.matrix[k][l]:
                    acc = acc + h.matrix[k][l] * theta[k][j]
                if h.matrix[j][k]:
                    acc = acc + h.matrix[j][k] * conjugate(theta[k][l])
            row.append(acc)
        out.append(row)
    return out


def is_metric(conn, h: HermitianForm) -> bool:
    return all(f.is_zero() for row in metric_residual(conn, h) for f in row)


def chern_connection(frame: Coframe, h: HermitianForm) -> InvariantConnection:
    """Chern connection: ``theta = h^{-1} d h = 0`` for constant ``h`` in a holomorphic frame."""
    h.validate()
    return zero_connection(frame, kind="chern")


# --- curvature ---------------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureTensor:
    frame: Coframe
    forms: tuple  # forms[k][j]: End-valued invariant 2-form

    @property
    def rank(self) -> int:
        return len(self.forms)

    def component(self, key: Sequence[int]) -> linalg.Matrix:
        return [[f.coefficient(key) for f in row] for row in self.forms]

    def part(self, p: int, q: int) -> "CurvatureTensor":
        return CurvatureTensor(self.frame, tuple(tuple(f.component(p, q) for f in row) for row in self.forms))

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.forms for f in row)

    def endomorphisms(self) -> dict:
        """Nonzero ``R(E_a, E_b)``, a < b, keyed by ``(a, b)``."""
        out = {}
        for key in self.frame.basis(2):
            m = self.component(key)
            if not linalg.is_zero(m):
                out[key] = m
        return out

    def wedge_form(self, a: InvariantForm) -> tuple:
        return tuple(tuple(wedge(f, a) for f in row) for row in self.forms)

    def trace(self) -> InvariantForm:
        out = self.frame.zero()
        for i in range(self.rank):
            out = out + self.forms[i][i]
        return out

    def to_json(self) -> list:
        return [[form_to_json(f) for f in row] for row in self.forms]


def curvature(conn) -> CurvatureTensor:
    """``R = d theta + theta ^ theta`` for any object carrying ``frame`` and ``theta``."""
    theta = conn.theta
    r = len(theta)
    rows = []
    for k in range(r):
        row = []
        for j in range(r):
            acc = ce_differential(theta[k][j])
            for m in range(r):
                if theta[k][m] and theta[m][j]:
                    acc = acc + wedge(theta[k][m], theta[m][j])
            row.append(acc)
        rows.append(tuple(row))
    return CurvatureTensor(conn.frame, tuple(rows))


def curvature_skew_residual(R: CurvatureTensor, h: HermitianForm) -> list[list[InvariantForm]]:
    """``R^T H + H conj(R)``: vanishes for curvatures of metric connections."""
    r = R.rank
    out = []
    for j in range(r):
        row = []
        for l in range(r):
            acc = R.frame.zero()
            for k in range(r):
                if h.matrix[k][l]:
                    acc = acc + h.matrix[k][l] * R.forms[k][j]
                if h.matrix[j][k]:
                    acc = acc + h.matrix[j][k] * conjugate(R.forms[k][l])
            row.append(acc)
        out.append(row)
    return out


def trace_r_wedge_r(conn_or_curvature) -> InvariantForm:
    R = conn_or_curvature if isinstance(conn_or_curvature, CurvatureTensor) else curvature(conn_or_curvature)
    out = R.frame.zero()
    for k in range(R.rank):
        for m in range(R.rank):
            if R.forms[k][m] and R.forms[m][k]:
                out = out + wedge(R.forms[k][m], R.forms[m][k])
    return out


# --- torsion -------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionTensor:
    """``full[a][b][c]``: ``E_c`` component of ``T(E_a, E_b)`` on the complexified frame."""

    frame: Coframe
    full: tuple

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def t20(self) -> list:
        """``T^k_ij``: the part on two holomorphic slots, ``[i][j][k]``."""
        n = self.n
        return [[[self.full[i][j][k] for k in range(n)] for j in range(n)] for i in range(n)]

    @property
    def mixed(self) -> list:
        """``T(e_i, ebar_j)`` components, ``[i][j][c]`` with c over the complexified frame."""
        n = self.n
        return [[list(self.full[i][n + j]) for j in range(n)] for i in range(n)]

    def is_zero(self) -> bool:
        return all(not x for a in self.full for b in a for x in b)

    def lowered(self, h: HermitianForm) -> list:
        """``g(T(E_a,E_b), E_c)`` with the complex-bilinear Riemannian metric."""
        G = complexified_metric(h)
        m = 2 * self.n
        out = _zeros3(m)
        for a in range(m):
            for b in range(m):
                for c in range(m):
                    s = ZERO
                    for dd in range(m):
                        if self.full[a][b][dd] and G[dd][c]:
                            s = s + self.full[a][b][dd] * G[dd][c]
                    out[a][b][c] = s
        return out

    def as_three_form(self, h: HermitianForm) -> InvariantForm:
        """The lowered torsion as a 3-form (meaningful when totally skew)."""
        low = self.lowered(h)
        m = 2 * self.n
        terms = {}
        for a in range(m):
            for b in range(a + 1, m):
                for c in range(b + 1, m):
                    if low[a][b][c]:
                        terms[(a, b, c)] = low[a][b][c]
        return InvariantForm(self.frame, terms)


def torsion(conn: InvariantConnection) -> TorsionTensor:
    """``T(X,Y) = nabla_X Y - nabla_Y X - [X,Y]_frame`` on the complexified frame."""
    m = 2 * conn.n
    F = conn.frame
    full = _zeros3(m)
    for a in range(m):
        for b in range(m):
            x = conn.covariant(a, b)
            y = conn.covariant(b, a)
            br = F.frame_bracket(a, b)
            full[a][b] = [x[c] - y[c] - br[c] for c in range(m)]
    return TorsionTensor(F, _freeze3(full))


def complexified_metric(h: HermitianForm) -> linalg.Matrix:
    """Complex-bilinear Riemannian metric on ``E``: ``g(e_i, ebar_j) = h_ij / 2``."""
    n = h.dim
    G = linalg.zeros(2 * n, 2 * n)
    half = gr(Fraction(1, 2))
    for i in range(n):
        for j in range(n):
            G[i][n + j] = half * h.matrix[i][j]
            G[n + j][i] = half * h.matrix[i][j]
    return G


def is_totally_antisymmetric(t) -> bool:
    m = len(t)
    for a in range(m):
        for b in range(m):
            for c in range(m):
                v = t[a][b][c]
                if v != -t[b][a][c] or v != -t[a][c][b]:
                    return False
    return True


@dataclass(frozen=True)
class SkewCheck:
    skew: bool
    raw_skew: bool
    raised: tuple  # s[p][q][k]
    identified: tuple  # s_hat[a][b][k]


def raise_index_matrix(h: HermitianForm) -> tuple:
    """Rows give ``h'(sigma^i) = sum_p M[i][p] e_p`` from ``h(h'(w), v) = w(v)``."""
    try:
        return h.inverse
    except SingularMetric:
        raise
    except Exception as exc:  # pragma: no cover - inverse only raises SingularMetric
        raise SingularMetric(str(exc)) from exc


def torsion_skew_check(T: TorsionTensor, h: HermitianForm, dagger: DaggerMap) -> SkewCheck:
    """Raise both form slots of the (2,0) torsion with ``h'`` and test skewness.

    ``raised`` applies the conjugate-linear raise ``h'`` slotwise to the basis
    covectors.  ``identified`` composes it with ``dagger`` (also conjugate-
    linear), so ``dagger . h'`` is a complex-linear equivariant map
    ``g* -> g`` and the result is a genuine element of ``wedge^2 g (x) g``.
    """
    n = T.n
    if linalg.det(h.matrix) == 0:
        raise SingularMetric("Hermitian form is singular")
    hinv = raise_index_matrix(h)
    D = dagger.matrix
    L = [[sum((D[a][p] * hinv[i][p].conj() for p in range(n)), ZERO) for i in range(n)] for a in range(n)]
    t20 = T.t20
    s, s_hat = _zeros3(n), _zeros3(n)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                v = t20[i][j][k]
                if not v:
                    continue
                for p in range(n):
                    for q in range(n):
                        w = hinv[i][p] * hinv[j][q]
                        if w:
                            s[p][q][k] = s[p][q][k] + v * w
                        w2 = L[p][i] * L[q][j]
                        if w2:
                            s_hat[p][q][k] = s_hat[p][q][k] + v * w2
    return SkewCheck(
        skew=is_totally_antisymmetric(s_hat),
        raw_skew=is_totally_antisymmetric(s),
        raised=_freeze3(s),
        identified=_freeze3(s_hat),
    )


# --- Bismut / Gauduchon ------------------------------------------------------------------


def _levi_civita_lowered(frame: Coframe, G) -> list:
    """``g(nabla_a E_b, E_c)`` from the Koszul formula (constant metric, frame fields)."""
    m = frame.rank
    br = [[frame.frame_bracket(a, b) for b in range(m)] for a in range(m)]
    B = _zeros3(m)
    for a in range(m):
        for b in range(m):
            for c in range(m):
                s = ZERO
                for dd in range(m):
                    if br[a][b][dd] and G[dd][c]:
                        s = s + br[a][b][dd] * G[dd][c]
                B[a][b][c] = s
    half = gr(Fraction(1, 2))
    return [[[half * (B[a][b][c] - B[a][c][b] - B[b][c][a]) for c in range(m)] for b in range(m)] for a in range(m)]


def _dw_of_j(frame: Coframe, h: HermitianForm) -> list:
    """``dω(J E_a, J E_b, J E_c)``."""
    m, n = frame.rank, frame.n
    dw = ce_differential(kaehler_form(frame, h))
    jf = [I if a < n else -I for a in range(m)]
    out = _zeros3(m)
    for key, v in dw.terms.items():
        for perm in permutations(range(3)):
            idx = tuple(key[p] for p in perm)
            inv = sum(1 for x in range(3) for y in range(x + 1, 3) if perm[x] > perm[y])
            val = v if inv % 2 == 0 else -v
            a, b, c = idx
            out[a][b][c] = jf[a] * jf[b] * jf[c] * val
    return out


def bismut_connection(frame: Coframe, h: HermitianForm) -> InvariantConnection:
    """Hermitian connection with totally skew torsion.

    Built as ``g(nabla_X Y, Z) = g(LC_X Y, Z) + eps/2 * dω(JX, JY, JZ)`` with the
    sign ``eps`` fixed by requiring ``nabla J = 0``.
    """
    h.validate()
    n, m = frame.n, frame.rank
    G = complexified_metric(h)
    Ginv = linalg.inverse(G)
    lc = _levi_civita_lowered(frame, G)
    H0 = _dw_of_j(frame, h)
    half = gr(Fraction(1, 2))
    for eps in (-1, 1):
        gamma = _zeros3(m)  # gamma[a][b][d]: E_d component of nabla_{E_a} E_b
        for a in range(m):
            for b in range(m):
                low = [lc[a][b][c] + eps * half * H0[a][b][c] for c in range(m)]
                for dd in range(m):
                    s = ZERO
                    for c in range(m):
                        if low[c] and Ginv[c][dd]:
                            s = s + low[c] * Ginv[c][dd]
                    gamma[a][b][dd] = s
        preserves_j = all(
            not gamma[a][b][dd]
            for a in range(m)
            for b in range(m)
            for dd in range(m)
            if (b < n) != (dd < n)
        )
        if preserves_j:
            g10 = [[[gamma[i][j][k] for k in range(n)] for j in range(n)] for i in range(n)]
            g01 = [[[gamma[n + i][j][k] for k in range(n)] for j in range(n)] for i in range(n)]
            return InvariantConnection(frame, _freeze3(g10), _freeze3(g01), "bismut")
    raise ArithmeticError("no sign makes the Bismut candidate preserve J")  # pragma: no cover


def gauduchon_family(frame: Coframe, h: HermitianForm, t) -> InvariantConnection:
    """Affine line ``(1-t) Chern + t Bismut`` of Hermitian connections."""
    t = gr(t)
    if not t.is_real():
        raise ValueError("family parameter must be real")
    return bismut_connection(frame, h).scaled(t, kind=f"gauduchon({t})")


# --- holonomy -------------------------------------------------------------------------


def _real_flatten(m) -> list:
    flat = [x for row in m for x in row]
    return [gr(x.re) for x in flat] + [gr(x.im) for x in flat]


def _real_unflatten(v, r: int) -> linalg.Matrix:
    k = r * r
    vals = [GaussRational(v[i].re, v[k + i].re) for i in range(k)]
    return [vals[i * r : (i + 1) * r] for i in range(r)]


def real_frame(frame: Coframe) -> list[list[GaussRational]]:
    """Real tangent basis ``e_a + ebar_a`` and ``i(e_a - ebar_a)`` on the complexified frame."""
    n = frame.n
    out = []
    for a in range(n):
        x = [ZERO] * (2 * n)
        x[a], x[n + a] = gr(1), gr(1)
        y = [ZERO] * (2 * n)
        y[a], y[n + a] = I, -I
        out += [x, y]
    return out


def holonomy_algebra(conn: InvariantConnection) -> list[linalg.Matrix]:
    """Basis of the (real) infinitesimal holonomy algebra of an invariant connection.

    Starts from ``R(X, Y)`` over real tangent vectors and closes under brackets
    with ``nabla_X`` and with itself, taking real spans throughout.
    """
    r = conn.n
    F = conn.frame
    R = curvature(conn)
    vecs = real_frame(F)
    comps = R.endomorphisms()
    gens = []
    for p, U in enumerate(vecs):
        for V in vecs[p + 1 :]:
            acc = linalg.zeros(r, r)
            for (x, y), M in comps.items():
                c = U[x] * V[y] - U[y] * V[x]
                if c:
                    acc = linalg.add(acc, linalg.scale(c, M))
            gens.append(_real_flatten(acc))
    span = linalg.row_space_basis(gens)
    if not span:
        return []
    gammas = []
    for U in vecs:
        g = linalg.zeros(r, r)
        for a, c in enumerate(U):
            if c:
                g = linalg.add(g, linalg.scale(c, conn.gamma_matrix(a)))
        gammas.append(g)
    while True:
        mats = [_real_unflatten(v, r) for v in span]
        candidates = [_real_flatten(linalg.commutator(g, m)) for g in gammas for m in mats]
        candidates += [_real_flatten(linalg.commutator(a, b)) for i, a in enumerate(mats) for b in mats[i + 1 :]]
        grown = linalg.row_space_basis(span + candidates)
        if len(grown) == len(span):
            return mats
        span = grown


def is_skew_hermitian(A, h: HermitianForm) -> bool:
    """``h(Av, w) + h(v, Aw) = 0``, i.e. ``A^T H + H conj(A) = 0``."""
    H = h.matrix
    return linalg.is_zero(linalg.add(linalg.matmul(linalg.transpose(A), H), linalg.matmul(H, linalg.conj(A))))


def su3_containment(basis: Sequence, h: HermitianForm) -> bool:
    return all(is_skew_hermitian(A, h) and not linalg.trace(A) for A in basis)


# --- serialization -----------------------------------------------------------------------


def connection_to_json(conn: InvariantConnection, h: HermitianForm) -> dict:
    R = curvature(conn)
    T = torsion(conn)
    strings = lambda t: [[[str(x) for x in col] for col in row] for row in t]  # noqa: E731
    return {
        "kind": conn.kind,
        "sign": conn.frame.sign,
        "gamma10": strings(conn.gamma10),
        "gamma01": strings(conn.gamma01),
        "residuals": {
            "metric_compatible": is_metric(conn, h),
            "curvature_zero": R.is_zero(),
            "torsion_zero": T.is_zero(),
            "torsion_totally_skew": is_totally_antisymmetric(T.lowered(h)),
            "trace_r_wedge_r": form_to_json(trace_r_wedge_r(R)),
        },
    }
