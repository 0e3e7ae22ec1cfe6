"""Finite-dimensional su(2)-modules built from recipes, with exact invariants.

The real form su(2) ⊂ sl(2,C) is spanned by ``u1, u2, u3`` (see
:func:`stromver.lie.su2_generators`).  A module stores the three action
matrices.  Recipes combine the base modules

    V0      standard 2-dim representation
    g       adjoint representation on sl(2,C)
    gbar    complex conjugate of g (basis ebar_k, action conj(ad u))
    C       trivial 1-dim representation

with ``dual(M)``, ``conj(M)``, ``end(M)``, ``wedgeK(M)``, ``symK(M)``,
``M + N`` (direct sum, also ``⊕``) and ``M * N`` (tensor, also ``⊗``).
Bases are ordered so that ``wedgeK(dual(g + gbar))`` coincides with the
degree-K basis of invariant forms.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from . import linalg
from .errors import MalformedRecipe
from .lie import SU2_STRUCTURE, ad_matrix, sl2_standard, su2_generators
from .scalars import I, ONE, ZERO, GaussRational, gr

Matrix = linalg.Matrix


@dataclass(frozen=True)
class ModuleSpace:
    dim: int
    actions: tuple  # three dim x dim matrices, rho(u1), rho(u2), rho(u3)
    recipe: str
    twisted: bool = False  # True when a conjugate factor is present

    def act(self, a: int, v: Sequence) -> list[GaussRational]:
        return linalg.matvec(self.actions[a], v)


@dataclass(frozen=True)
class Decomposition:
    irreps: dict  # highest weight label m -> multiplicity (irrep dim m+1)

    @property
    def dimension(self) -> int:
        return sum(mult * (m + 1) for m, mult in self.irreps.items())

    def __str__(self) -> str:
        if not self.irreps:
            return "0"
        return " + ".join(f"{mult}*Sym^{m}" if mult > 1 else f"Sym^{m}" for m, mult in sorted(self.irreps.items(), reverse=True))


def _freeze(m) -> tuple:
    return tuple(tuple(row) for row in m)


# --- base modules ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def _standard() -> ModuleSpace:
    g, _, _ = sl2_standard()
    acts = tuple(_freeze(g.realize(u)) for u in su2_generators(g))
    return ModuleSpace(2, acts, "V0")


@lru_cache(maxsize=None)
def _adjoint() -> ModuleSpace:
    g, _, _ = sl2_standard()
    acts = tuple(_freeze(ad_matrix(g, u)) for u in su2_generators(g))
    return ModuleSpace(3, acts, "g")


def trivial() -> ModuleSpace:
    z = ((ZERO,),)
    return ModuleSpace(1, (z, z, z), "C")


def standard() -> ModuleSpace:
    return _standard()


def adjoint() -> ModuleSpace:
    return _adjoint()


# --- functorial constructions -------------------------------------------------------------


def conj_module(m: ModuleSpace) -> ModuleSpace:
    return ModuleSpace(m.dim, tuple(_freeze(linalg.conj(a)) for a in m.actions), f"conj({m.recipe})", True)


def conjugate_adjoint() -> ModuleSpace:
    m = conj_module(adjoint())
    return ModuleSpace(m.dim, m.actions, "gbar", True)


def dual(m: ModuleSpace) -> ModuleSpace:
    acts = tuple(_freeze(linalg.scale(-1, linalg.transpose(a))) for a in m.actions)
    return ModuleSpace(m.dim, acts, f"dual({m.recipe})", m.twisted)


def direct_sum(a: ModuleSpace, b: ModuleSpace) -> ModuleSpace:
    acts = tuple(_freeze(linalg.block_diag(x, y)) for x, y in zip(a.actions, b.actions))
    return ModuleSpace(a.dim + b.dim, acts, f"({a.recipe} + {b.recipe})", a.twisted or b.twisted)


def tensor(a: ModuleSpace, b: ModuleSpace) -> ModuleSpace:
    """Leibniz action; basis index ``i * b.dim + j`` for ``v_i (x) w_j``."""
    ia, ib = linalg.identity(a.dim), linalg.identity(b.dim)
    acts = tuple(
        _freeze(linalg.add(linalg.kron(x, ib), linalg.kron(ia, y))) for x, y in zip(a.actions, b.actions)
    )
    return ModuleSpace(a.dim * b.dim, acts, f"({a.recipe} * {b.recipe})", a.twisted or b.twisted)


def end(m: ModuleSpace) -> ModuleSpace:
    """``M (x) M*``; index ``i * dim + j`` is the matrix unit ``E[i][j]``."""
    t = tensor(m, dual(m))
    return ModuleSpace(t.dim, t.actions, f"end({m.recipe})", t.twisted)


def _multi_action(m: ModuleSpace, keys: list[tuple], a: Matrix, sym: bool) -> Matrix:
    index = {k: i for i, k in enumerate(keys)}
    out = linalg.zeros(len(keys), len(keys))
    for col, key in enumerate(keys):
        for pos, src in enumerate(key):
            for dst in range(m.dim):
                c = a[dst][src]
                if not c:
                    continue
                new = list(key)
                new[pos] = dst
                if sym:
                    target, sign = tuple(sorted(new)), 1
                else:
                    if len(set(new)) < len(new):
                        continue
                    inv = sum(1 for x in range(len(new)) for y in range(x + 1, len(new)) if new[x] > new[y])
                    target, sign = tuple(sorted(new)), (-1 if inv % 2 else 1)
                row = index[target]
                out[row][col] = out[row][col] + (c if sign == 1 else -c)
    return out


def wedge_power(m: ModuleSpace, k: int) -> ModuleSpace:
    """``wedge^k M`` on the basis of increasing index tuples (lexicographic)."""
    keys = list(combinations(range(m.dim), k))
    acts = tuple(_freeze(_multi_action(m, keys, a, sym=False)) for a in m.actions)
    return ModuleSpace(len(keys), acts, f"wedge{k}({m.recipe})", m.twisted)


def sym_power(m: ModuleSpace, k: int) -> ModuleSpace:
    """``Sym^k M`` on the monomial basis of non-decreasing index tuples."""
    keys = list(combinations_with_replacement(range(m.dim), k))
    acts = tuple(_freeze(_multi_action(m, keys, a, sym=True)) for a in m.actions)
    return ModuleSpace(len(keys), acts, f"sym{k}({m.recipe})", m.twisted)


# --- recipe parser ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[^\s()+*⊕⊗]+)|(?P<op>[()+*⊕⊗]))")
_BASE = {"v0": standard, "g": adjoint, "gbar": conjugate_adjoint, "ḡ": conjugate_adjoint, "c": trivial, "triv": trivial}


def _tokenize(text: str) -> list[str]:
    text = text.replace("∧", "wedge").replace("Λ", "wedge")
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise MalformedRecipe(f"unexpected character at {pos} in {text!r}")
        out.append(m.group("name") or {"⊕": "+", "⊗": "*"}.get(m.group("op"), m.group("op")))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise MalformedRecipe(f"expected {expected or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> ModuleSpace:
        m = self.expr()
        if self.peek() is not None:
            raise MalformedRecipe(f"trailing input {self.peek()!r} in {self.text!r}")
        return m

    def expr(self) -> ModuleSpace:
        m = self.term()
        while self.peek() == "+":
            self.take()
            m = direct_sum(m, self.term())
        return m

    def term(self) -> ModuleSpace:
        m = self.factor()
        while self.peek() == "*":
            self.take()
            m = tensor(m, self.factor())
        return m

    def factor(self) -> ModuleSpace:
        tok = self.take()
        if tok == "(":
            m = self.expr()
            self.take(")")
            return m
        if tok in "+*)":
            raise MalformedRecipe(f"unexpected {tok!r} in {self.text!r}")
        name = tok.lower()
        if self.peek() != "(":
            if name in _BASE:
                return _BASE[name]()
            raise MalformedRecipe(f"unknown module {tok!r}")
        self.take("(")
        inner = self.expr()
        self.take(")")
        if name == "dual":
            return dual(inner)
        if name == "conj":
            return conj_module(inner)
        if name == "end":
            return end(inner)
        fm = re.fullmatch(r"(wedge|sym)(\d+)", name)
        if fm:
            k = int(fm.group(2))
            if fm.group(1) == "wedge":
                if k > inner.dim:
                    raise MalformedRecipe(f"wedge{k} of a {inner.dim}-dim module")
                return wedge_power(inner, k)
            return sym_power(inner, k)
        raise MalformedRecipe(f"unknown construction {tok!r}")


def build_module(recipe: str) -> ModuleSpace:
    if not isinstance(recipe, str) or not recipe.strip():
        raise MalformedRecipe("empty recipe")
    m = _Parser(recipe).parse()
    return ModuleSpace(m.dim, m.actions, recipe.strip(), m.twisted)


# --- invariants and decomposition ---------------------------------------------------------------


def commutation_residuals(m: ModuleSpace) -> dict:
    """Nonzero entries of ``[rho(u_a), rho(u_b)] - rho([u_a, u_b])``."""
    out = {}
    for (a, b), coeffs in SU2_STRUCTURE.items():
        lhs = linalg.commutator(m.actions[a], m.actions[b])
        rhs = linalg.zeros(m.dim, m.dim)
        for c, k in enumerate(coeffs):
            if k:
                rhs = linalg.add(rhs, linalg.scale(k, m.actions[c]))
        diff = linalg.sub(lhs, rhs)
        if not linalg.is_zero(diff):
            out[(a, b)] = diff
    return out


def invariant_subspace(m: ModuleSpace) -> list[list[GaussRational]]:
    stacked = [row for a in m.actions for row in a]
    return linalg.nullspace(stacked, m.dim)


def casimir(m: ModuleSpace) -> Matrix:
    """``-sum rho(u_a)^2``; acts on the irrep of label m by ``m(m+2)``."""
    acc = linalg.zeros(m.dim, m.dim)
    for a in m.actions:
        acc = linalg.sub(acc, linalg.matmul(a, a))
    return acc


def _kernel_dim(a: Matrix, shift: int) -> int:
    n = len(a)
    shifted = [[a[i][j] - (shift if i == j else 0) for j in range(n)] for i in range(n)]
    return n - linalg.rank(shifted)


def weight_multiplicities(m: ModuleSpace) -> dict:
    """Eigenvalue multiplicities of ``H = -i rho(u1)`` (integer weights)."""
    H = linalg.scale(-I, m.actions[0])
    out, seen = {}, 0
    for w in range(0, m.dim + 1):
        for wt in {w, -w}:
            k = _kernel_dim(H, wt)
            if k:
                out[wt] = k
                seen += k
        if seen == m.dim:
            break
    return out


def decompose(m: ModuleSpace) -> Decomposition:
    """Irreducible multiplicities from Casimir eigenspaces, checked by weights."""
    weights = weight_multiplicities(m)
    by_weight = {}
    top = max(weights) if weights else -1
    for lab in range(top, -1, -1):
        mult = weights.get(lab, 0) - weights.get(lab + 2, 0)
        if mult:
            by_weight[lab] = mult
    C = casimir(m)
    by_casimir = {}
    for lab in range(top + 1):
        k = _kernel_dim(C, lab * (lab + 2))
        if k:
            if k % (lab + 1):
                raise ArithmeticError(f"Casimir eigenspace of dim {k} for label {lab}")
            by_casimir[lab] = k // (lab + 1)
    if by_casimir != by_weight:
        raise ArithmeticError(f"Casimir {by_casimir} and weight {by_weight} decompositions disagree")
    d = Decomposition(dict(sorted(by_casimir.items())))
    if d.dimension != m.dim:
        raise ArithmeticError("decomposition does not exhaust the module")
    return d


def locate_invariant(m: ModuleSpace, candidate: Sequence, reference: Sequence | None = None):
    """Whether ``candidate`` lies on the invariant line, and its coordinate on it.

    The line is spanned by ``reference`` when given (it must itself be
    invariant and nonzero), otherwise by the exact kernel basis vector.
    Returns ``(found, scalar)`` with ``candidate == scalar * spanning vector``.
    """
    basis = invariant_subspace(m)
    if len(basis) != 1:
        raise ValueError(f"invariant subspace has dimension {len(basis)}, expected 1")
    line = basis[0]
    if reference is not None:
        ref = [gr(x) for x in reference]
        c = linalg.solve_in_span([line], ref)
        if c is None or not c[0]:
            raise ValueError("reference vector does not span the invariant line")
        line = ref
    coeffs = linalg.solve_in_span([line], [gr(x) for x in candidate])
    if coeffs is None:
        return False, None
    return True, coeffs[0]


def report(m: ModuleSpace) -> dict:
    d = decompose(m)
    return {
        "module": m.recipe,
        "invariant_dim": len(invariant_subspace(m)),
        "irreps": {str(k): v for k, v in d.irreps.items()},
    }


def report_json(m: ModuleSpace) -> str:
    return json.dumps(report(m), sort_keys=True)


def tensor3_to_vector(t) -> list[GaussRational]:
    """Pack ``t[a][b][k]`` (antisymmetric in a, b) into ``wedge2(V) * V`` coordinates."""
    n = len(t)
    out = []
    for a, b in combinations(range(n), 2):
        for k in range(n):
            out.append(t[a][b][k])
    return out
