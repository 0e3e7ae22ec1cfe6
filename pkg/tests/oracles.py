"""Independent reference computations used by the tests.

Nothing here imports the package.  Forms are evaluated as alternating
multilinear maps on the complexified frame, the differential uses the
Chevalley-Eilenberg evaluation formula, and structure constants come
straight from sympy matrix commutators.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations, combinations_with_replacement, permutations

import sympy as sp

N = 3  # complex dimension; frame indices 0..2 holomorphic, 3..5 antiholomorphic


def sl2_structure():
    A = sp.Matrix([[1, 0], [0, -1]])
    B = sp.Matrix([[0, 1], [0, 0]])
    C = sp.Matrix([[0, 0], [1, 0]])
    basis = [A, B, C]

    def coords(M):
        return [M[0, 0], M[0, 1], M[1, 0]]

    return [[coords(X * Y - Y * X) for Y in basis] for X in basis]


def _perm_sign(seq) -> int:
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


class Form:
    """``values[sorted tuple] = form(E_a1, ..., E_ak)``."""

    def __init__(self, k, values=None):
        self.k = k
        self.values = {key: sp.nsimplify(v) for key, v in (values or {}).items() if v != 0}

    def on_basis(self, idx):
        if len(set(idx)) < len(idx):
            return 0
        return _perm_sign(idx) * self.values.get(tuple(sorted(idx)), 0)

    def on_vectors(self, vecs):
        """Multilinear expansion; ``vecs`` are dicts index -> coefficient."""
        total = 0
        for combo in _product([list(v.items()) for v in vecs]):
            coeff = 1
            idx = []
            for i, c in combo:
                coeff *= c
                idx.append(i)
            total += coeff * self.on_basis(idx)
        return sp.expand(total)

    def project(self, p, q):
        return Form(self.k, {key: v for key, v in self.values.items() if sum(1 for a in key if a < N) == p and len(key) - p == q})


def _product(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _product(lists[1:]):
            yield (head,) + tail


def frame_bracket(c, sign):
    """``[E_a, E_b]`` of right-invariant fields as dicts."""
    def br(a, b):
        if (a < N) != (b < N):
            return {}
        off = 0 if a < N else N
        i, j = a - off, b - off
        out = {}
        for k in range(N):
            v = -sign * (c[i][j][k] if off == 0 else sp.conjugate(c[i][j][k]))
            if v != 0:
                out[k + off] = v
        return out

    return br


def d(form: Form, br) -> Form:
    k = form.k
    vals = {}
    for key in combinations(range(2 * N), k + 1):
        total = 0
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                rest = [{key[m]: 1} for m in range(k + 1) if m not in (i, j)]
                bij = br(key[i], key[j])
                if bij:
                    total += (-1) ** (i + j) * form.on_vectors([bij] + rest)
        vals[key] = total
    return Form(k + 1, vals)


def wedge(a: Form, b: Form) -> Form:
    k, l = a.k, b.k
    vals = {}
    for key in combinations(range(2 * N), k + l):
        total = 0
        for left in combinations(range(k + l), k):
            right = [m for m in range(k + l) if m not in left]
            order = list(left) + right
            total += _perm_sign(order) * a.on_basis([key[m] for m in left]) * b.on_basis([key[m] for m in right])
        vals[key] = total
    return Form(k + l, vals)


def kaehler(h) -> Form:
    return Form(2, {(i, N + j): sp.I * h[i][j] / 2 for i in range(N) for j in range(N) if h[i][j] != 0})


def ddbar_constant(h=((2, 0, 0), (0, 1, 0), (0, 0, 1)), sign=1):
    """``kappa`` with ``i d' d'' omega = kappa omega^2``."""
    br = frame_bracket(sl2_structure(), sign)
    w = kaehler(h)
    dbar_w = d(w, br).project(1, 2)
    lhs = d(dbar_w, br).project(2, 2)
    lhs = Form(4, {k: sp.I * v for k, v in lhs.values.items()})
    w2 = wedge(w, w)
    key, ref = next(iter(w2.values.items()))
    kappa = sp.nsimplify(lhs.values.get(key, 0) / ref)
    for k in set(lhs.values) | set(w2.values):
        assert sp.simplify(lhs.values.get(k, 0) - kappa * w2.values.get(k, 0)) == 0, "not proportional"
    return kappa


# --- su(2) weights ------------------------------------------------------------------------------

BASE_WEIGHTS = {"V0": [1, -1], "g": [2, 0, -2], "gbar": [2, 0, -2], "C": [0]}


def weights_sym(ws, k):
    return [sum(c) for c in combinations_with_replacement(ws, k)]


def weights_wedge(ws, k):
    return [sum(c) for c in combinations(ws, k)]


def weights_tensor(a, b):
    return [x + y for x in a for y in b]


def weights_dual(ws):
    return [-w for w in ws]


def multiplicities(ws) -> dict:
    cnt = Counter(ws)
    out = {}
    for m in range(max(ws, default=-1), -1, -1):
        mult = cnt.get(m, 0) - cnt.get(m + 2, 0)
        if mult:
            out[m] = mult
    return out


def ddbar_via_permutations_check():
    """Sanity: the shuffle wedge agrees with a brute-force alternation on two 1-forms."""
    a = Form(1, {(0,): 1})
    b = Form(1, {(3,): 1})
    w = wedge(a, b)
    brute = sum(_perm_sign(p) * a.on_basis([(0, 3)[p[0]]]) * b.on_basis([(0, 3)[p[1]]]) for p in permutations(range(2)))
    return w.values.get((0, 3), 0) == brute
