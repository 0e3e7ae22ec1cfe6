"""Right-invariant complex differential forms on a complex Lie group.

A form is a finite sum of monomials in the coframe.  Generator ``k < n`` is
the holomorphic coframe ``sigma^k`` dual to the right-invariant field ``e_k``;
generator ``n + k`` is its conjugate ``sigma-bar^k``.  A monomial is stored as
a strictly increasing tuple of generator indices, so holomorphic factors
always precede antiholomorphic ones.

Sign convention (shared with :mod:`stromver.connections`)
---------------------------------------------------------
Right-invariant vector fields satisfy ``[e_i, e_j]_frame = -[e_i, e_j]``.
With the wedge/evaluation convention ``(a^b)(X,Y) = a(X)b(Y) - a(Y)b(X)``
this gives ``d sigma^k = s * sum_{i<j} c^k_ij sigma^i ^ sigma^j`` with
``s = +1``.  ``Coframe(sign=-1)`` flips ``s`` together with the frame
bracket, which is the left-invariant convention.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from math import factorial
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import AmbientMismatch, OutOfModel
from .lie import HermitianForm, LieAlgebraData
from .scalars import I, ONE, ZERO, GaussRational, gr

RIGHT_INVARIANT = 1
FLIPPED = -1

Key = tuple[int, ...]


@dataclass(frozen=True)
class Coframe:
    """Invariant coframe of a Lie algebra under a fixed sign convention."""

    algebra: LieAlgebraData
    sign: int = RIGHT_INVARIANT

    def __post_init__(self) -> None:
        if self.sign not in (RIGHT_INVARIANT, FLIPPED):
            raise ValueError("sign must be +1 or -1")

    @property
    def n(self) -> int:
        return self.algebra.dim

    @property
    def rank(self) -> int:
        """Number of real dimensions, i.e. complex coframe generators."""
        return 2 * self.algebra.dim

    def is_holomorphic(self, a: int) -> bool:
        return a < self.n

    @cached_property
    def d_generators(self) -> tuple[dict, ...]:
        n, c, s = self.n, self.algebra.structure, self.sign
        out = []
        for k in range(n):
            terms = {}
            for i in range(n):
                for j in range(i + 1, n):
                    if c[i][j][k]:
                        terms[(i, j)] = s * c[i][j][k]
            out.append(terms)
        for k in range(n):
            out.append({(n + i, n + j): v.conj() for (i, j), v in out[k].items()})
        return tuple(out)

    def frame_bracket(self, a: int, b: int) -> list[GaussRational]:
        """Components of ``[E_a, E_b]`` on the complexified frame ``E``."""
        n, c, s = self.n, self.algebra.structure, self.sign
        out = [ZERO] * (2 * n)
        if a < n and b < n:
            for k in range(n):
                if c[a][b][k]:
                    out[k] = -s * c[a][b][k]
        elif a >= n and b >= n:
            for k in range(n):
                if c[a - n][b - n][k]:
                    out[n + k] = -s * c[a - n][b - n][k].conj()
        return out

    # constructors ---------------------------------------------------------
    def zero(self) -> "InvariantForm":
        return InvariantForm(self, {})

    def scalar(self, c) -> "InvariantForm":
        return InvariantForm(self, {(): gr(c)})

    def sigma(self, k: int) -> "InvariantForm":
        return InvariantForm(self, {(k,): ONE})

    def sigma_bar(self, k: int) -> "InvariantForm":
        return InvariantForm(self, {(self.n + k,): ONE})

    def monomial(self, key: Iterable[int], coeff=ONE) -> "InvariantForm":
        key = tuple(key)
        sign, k = _sort_with_sign(key)
        if sign == 0:
            return self.zero()
        return InvariantForm(self, {k: sign * gr(coeff)})

    def basis(self, degree: int | None = None) -> list[Key]:
        degrees = range(self.rank + 1) if degree is None else [degree]
        return [k for p in degrees for k in combinations(range(self.rank), p)]

    def label(self, a: int) -> str:
        labels = self.algebra.labels
        return labels[a] if a < self.n else labels[a - self.n]

    def with_sign(self, sign: int) -> "Coframe":
        return Coframe(self.algebra, sign)


def _sort_with_sign(seq: Sequence[int]) -> tuple[int, Key]:
    if len(set(seq)) != len(seq):
        return 0, ()
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def _merge(a: Key, b: Key) -> tuple[int, Key]:
    """``e^a ^ e^b = sign * e^merged``; sign 0 when an index repeats."""
    if not a or not b:
        return 1, a + b
    inv = 0
    sa = set(a)
    for y in b:
        if y in sa:
            return 0, ()
        inv += len(a) - bisect_right(a, y)
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


class InvariantForm:
    """Immutable sum of coframe monomials with Gaussian rational coefficients."""

    __slots__ = ("frame", "terms")

    def __init__(self, frame: Coframe, terms: Mapping[Key, GaussRational]) -> None:
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "terms", {k: v for k, v in terms.items() if v})

    def __setattr__(self, name, value):
        raise AttributeError("InvariantForm is immutable")

    # structure ---------------------------------------------------------
    def degrees(self) -> set[int]:
        return {len(k) for k in self.terms}

    def bidegree(self, key: Key) -> tuple[int, int]:
        p = sum(1 for a in key if a < self.frame.n)
        return p, len(key) - p

    def bidegrees(self) -> set[tuple[int, int]]:
        return {self.bidegree(k) for k in self.terms}

    def component(self, p: int, q: int) -> "InvariantForm":
        return InvariantForm(self.frame, {k: v for k, v in self.terms.items() if self.bidegree(k) == (p, q)})

    def homogeneous(self, degree: int) -> "InvariantForm":
        return InvariantForm(self.frame, {k: v for k, v in self.terms.items() if len(k) == degree})

    def coefficient(self, key: Iterable[int]) -> GaussRational:
        sign, k = _sort_with_sign(tuple(key))
        return sign * self.terms.get(k, ZERO) if sign else ZERO

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    # arithmetic ----------------------------------------------------------
    def _check(self, other: "InvariantForm") -> None:
        if other.frame is not self.frame and other.frame != self.frame:
            raise AmbientMismatch("forms live on different coframes")

    def __add__(self, other):
        if not isinstance(other, InvariantForm):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return InvariantForm(self.frame, out)

    def __sub__(self, other):
        if not isinstance(other, InvariantForm):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "InvariantForm":
        return InvariantForm(self.frame, {k: -v for k, v in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, InvariantForm):
            return NotImplemented
        c = gr(c)
        return InvariantForm(self.frame, {k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "InvariantForm") -> "InvariantForm":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if isinstance(other, InvariantForm):
            return self.frame == other.frame and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"InvariantForm({render(self)})"


# --- algebraic operations -----------------------------------------------------------


def wedge(a: InvariantForm, b: InvariantForm) -> InvariantForm:
    a._check(b)
    out: dict[Key, GaussRational] = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            sign, k = _merge(ka, kb)
            if sign:
                v = va * vb
                out[k] = out.get(k, ZERO) + (v if sign > 0 else -v)
    return InvariantForm(a.frame, out)


def wedge_all(forms: Iterable[InvariantForm]) -> InvariantForm:
    forms = list(forms)
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def power(a: InvariantForm, k: int) -> InvariantForm:
    out = a.frame.scalar(1)
    for _ in range(k):
        out = wedge(out, a)
    return out


def _d_monomial(frame: Coframe, key: Key, which: str) -> dict[Key, GaussRational]:
    n = frame.n
    gens = frame.d_generators
    out: dict[Key, GaussRational] = {}
    for r, a in enumerate(key):
        if which == "del" and a >= n or which == "delbar" and a < n:
            continue
        rest = key[:r] + key[r + 1 :]
        sign_r = -1 if r % 2 else 1
        for k2, v in gens[a].items():
            sign, k = _merge(k2, rest)
            if sign:
                out[k] = out.get(k, ZERO) + (sign * sign_r) * v
    return out


def _apply_d(a: InvariantForm, which: str) -> InvariantForm:
    out: dict[Key, GaussRational] = {}
    for key, v in a.terms.items():
        for k, w in _d_monomial(a.frame, key, which).items():
            out[k] = out.get(k, ZERO) + v * w
    return InvariantForm(a.frame, out)


def ce_differential(a: InvariantForm) -> InvariantForm:
    """Exterior derivative of an invariant form (constant coefficients)."""
    return _apply_d(a, "full")


d = ce_differential


def del_(a: InvariantForm) -> InvariantForm:
    """(p+1, q) part of ``d``; the structure equations are pure type (2,0)/(0,2)."""
    return _apply_d(a, "del")


def delbar(a: InvariantForm) -> InvariantForm:
    return _apply_d(a, "delbar")


def conjugate(a: InvariantForm) -> InvariantForm:
    n = a.frame.n
    out = {}
    for key, v in a.terms.items():
        swapped = tuple(x + n if x < n else x - n for x in key)
        sign, k = _sort_with_sign(swapped)
        out[k] = sign * v.conj()
    return InvariantForm(a.frame, out)


def evaluate(a: InvariantForm, vectors: Sequence[Sequence]) -> GaussRational:
    """Value on complexified frame vectors (determinant convention)."""
    k = len(vectors)
    total = ZERO
    for key, v in a.terms.items():
        if len(key) != k:
            continue
        m = [[gr(vec[idx]) for vec in vectors] for idx in key]
        total = total + v * linalg.det(m)
    return total


def top_coefficient(a: InvariantForm) -> GaussRational:
    return a.terms.get(tuple(range(a.frame.rank)), ZERO)


def proportionality(a: InvariantForm, b: InvariantForm) -> GaussRational | None:
    """Scalar ``c`` with ``a == c*b``; None when no such scalar exists."""
    a._check(b)
    if b.is_zero():
        return ZERO if a.is_zero() else None
    key, bv = next(iter(b.terms.items()))
    c = a.terms.get(key, ZERO) / bv
    return c if a == c * b else None


# --- metric operations -----------------------------------------------------------


def kaehler_form(frame: Coframe, h: HermitianForm) -> InvariantForm:
    """``omega = (i/2) sum h_mn sigma^m ^ sigma-bar^n``."""
    n = frame.n
    half_i = I * gr("1/2")
    terms = {}
    for m in range(n):
        for p in range(n):
            if h.matrix[m][p]:
                terms[(m, n + p)] = half_i * h.matrix[m][p]
    return InvariantForm(frame, terms)


@lru_cache(maxsize=64)
def _inverse_metric(h: HermitianForm) -> tuple:
    """Complex-bilinear metric on 1-forms in the basis (sigma, sigma-bar)."""
    n = h.dim
    hinv = h.inverse
    g = linalg.zeros(2 * n, 2 * n)
    for m in range(n):
        for p in range(n):
            v = 2 * hinv[p][m]
            g[m][n + p] = v
            g[n + p][m] = v
    return tuple(tuple(r) for r in g)


def form_inner(a: InvariantForm, b: InvariantForm, h: HermitianForm) -> GaussRational:
    """Complex-bilinear extension of the Riemannian inner product on forms."""
    a._check(b)
    ginv = _inverse_metric(h)
    total = ZERO
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            if len(ka) != len(kb):
                continue
            if not ka:
                total = total + va * vb
                continue
            m = [[ginv[x][y] for y in kb] for x in ka]
            g = linalg.det(m)
            if g:
                total = total + va * vb * g
    return total


def hermitian_inner(a: InvariantForm, b: InvariantForm, h: HermitianForm) -> GaussRational:
    """Pointwise Hermitian product, conjugate-linear in ``b``."""
    return form_inner(a, conjugate(b), h)


@lru_cache(maxsize=64)
def volume_coefficient(frame: Coframe, h: HermitianForm) -> GaussRational:
    """Top-monomial coefficient of ``vol = omega^n / n!``."""
    omega = kaehler_form(frame, h)
    return top_coefficient(power(omega, frame.n)) / factorial(frame.n)


def volume_form(frame: Coframe, h: HermitianForm) -> InvariantForm:
    return InvariantForm(frame, {tuple(range(frame.rank)): volume_coefficient(frame, h)})


@lru_cache(maxsize=64)
def _star_table(frame: Coframe, h: HermitianForm) -> dict:
    rank = frame.rank
    ginv = _inverse_metric(h)
    vol = volume_coefficient(frame, h)
    full = tuple(range(rank))
    table = {}
    for k in range(rank + 1):
        basis = list(combinations(full, k))
        for s in basis:
            image = {}
            for s2 in basis:
                g = linalg.det([[ginv[x][y] for y in s] for x in s2]) if k else ONE
                if not g:
                    continue
                comp = tuple(x for x in full if x not in s2)
                sign, _ = _merge(s2, comp)
                image[comp] = image.get(comp, ZERO) + g * vol * sign
            table[s] = {kk: v for kk, v in image.items() if v}
    return table


def hodge_star(a: InvariantForm, h: HermitianForm) -> InvariantForm:
    """Complex-bilinear Hodge star: ``b ^ *a = <b, a> vol`` for all ``b``."""
    table = _star_table(a.frame, h)
    out: dict[Key, GaussRational] = {}
    for key, v in a.terms.items():
        for k, w in table[key].items():
            out[k] = out.get(k, ZERO) + v * w
    return InvariantForm(a.frame, out)


def codifferential(a: InvariantForm, h: HermitianForm) -> InvariantForm:
    """``d* = -* d *`` (real dimension is even)."""
    return -hodge_star(ce_differential(hodge_star(a, h)), h)


# --- holomorphic volume section ----------------------------------------------------


class TopFormSection:
    """Constant multiple of ``sigma^1 ^ ... ^ sigma^n``, dual to ``e_1 ^ ... ^ e_n``."""

    __slots__ = ("coefficient",)

    def __init__(self, coefficient=ONE) -> None:
        if isinstance(coefficient, InvariantForm) or callable(coefficient):
            raise OutOfModel("only constant sections of the canonical bundle are representable")
        c = gr(coefficient)
        if not c:
            raise OutOfModel("a nowhere-zero section needs a nonzero coefficient")
        object.__setattr__(self, "coefficient", c)

    def __setattr__(self, name, value):
        raise AttributeError("TopFormSection is immutable")

    def as_form(self, frame: Coframe) -> InvariantForm:
        return InvariantForm(frame, {tuple(range(frame.n)): self.coefficient})

    def __repr__(self) -> str:
        return f"TopFormSection({self.coefficient})"


def omega_norm(theta: TopFormSection, h: HermitianForm) -> GaussRational:
    """Squared pointwise norm ``|c|^2 / det h`` of the holomorphic volume section."""
    return GaussRational(theta.coefficient.norm_sq()) / h.det


# --- rendering -----------------------------------------------------------------------


def _sorted_terms(a: InvariantForm):
    return sorted(a.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))


def render(a: InvariantForm) -> str:
    if a.is_zero():
        return "0"
    n = a.frame.n
    parts = []
    for key, v in _sorted_terms(a):
        p, q = a.bidegree(key)
        hol = "".join(a.frame.label(x) for x in key if x < n)
        anti = "".join(a.frame.label(x) for x in key if x >= n)
        mono = (f"σ^{{{hol}}}" if hol else "") + (f"σ̄^{{{anti}}}" if anti else "")
        parts.append(f"(({p},{q})) {v} {mono}".rstrip())
    return " + ".join(parts)


def to_json(a: InvariantForm) -> list:
    """Term list ``[[hol_indices, antihol_indices, "coeff"], ...]`` in a stable order."""
    n = a.frame.n
    return [[[x for x in key if x < n], [x - n for x in key if x >= n], str(v)] for key, v in _sorted_terms(a)]


def form_to_vector(a: InvariantForm, degree: int) -> list[GaussRational]:
    """Coordinates in the ``combinations(range(2n), degree)`` basis."""
    return [a.terms.get(k, ZERO) for k in combinations(range(a.frame.rank), degree)]


def vector_to_form(frame: Coframe, vec: Sequence, degree: int) -> InvariantForm:
    return InvariantForm(frame, dict(zip(combinations(range(frame.rank), degree), (gr(x) for x in vec))))
