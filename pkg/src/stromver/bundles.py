"""Unitary representations of presented groups and the flat bundles they define.

Group words use one letter per generator; an upper-case letter is the
inverse of the lower-case generator (``"abAB"`` is the commutator).
Representations run either in exact Q(i) arithmetic or in floating point
with a tolerance, and every report records which.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .connections import CurvatureTensor, curvature
from .errors import DimensionMismatch, IndeterminateRank, InvalidRank, StromverError
from .forms import Coframe, InvariantForm, power, top_coefficient, wedge
from .scalars import I, ONE, ZERO, GaussRational, gr

DEFAULT_TOL = 1e-10
EXACT, FLOAT = "exact", "float"

STABLE = "stable-by-irreducible-flat"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[str, ...] = ()
    is_free: bool = False

    def __post_init__(self) -> None:
        for g in self.generators:
            if len(g) != 1 or not g.islower():
                raise StromverError(f"generator names must be single lower-case letters, got {g!r}")
        if len(set(self.generators)) != len(self.generators):
            raise StromverError("duplicate generator names")
        if self.is_free and self.relators:
            raise StromverError("a free presentation has no relators")
        if not self.is_free and not self.relators:
            raise StromverError("relators are required unless the presentation is free")
        for w in self.relators:
            if not w:
                raise StromverError("empty relator")
            bad = [ch for ch in w if ch.lower() not in self.generators]
            if bad:
                raise StromverError(f"relator {w!r} uses undeclared generators {bad}")

    @classmethod
    def free(cls, generators: Sequence[str]) -> "GroupPresentation":
        return cls(tuple(generators), (), True)


@dataclass(frozen=True)
class UnitaryRep:
    n: int
    generators: Mapping[str, object]  # name -> exact Matrix or complex ndarray
    mode: str = EXACT
    tol: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        if self.mode not in (EXACT, FLOAT):
            raise StromverError(f"unknown arithmetic mode {self.mode!r}")
        for name, m in self.generators.items():
            rows = len(m)
            if rows != self.n or any(len(r) != self.n for r in m):
                raise DimensionMismatch(f"generator {name!r} is not {self.n}x{self.n}")

    def matrix(self, symbol: str):
        base = self.generators[symbol.lower()]
        if symbol.islower():
            return base
        if self.mode == FLOAT:
            return np.linalg.inv(base)
        return linalg.inverse(base)

    def evaluate(self, word: str):
        out = self.identity()
        for ch in word:
            out = self._mul(out, self.matrix(ch))
        return out

    def identity(self):
        return np.eye(self.n, dtype=complex) if self.mode == FLOAT else linalg.identity(self.n)

    def _mul(self, a, b):
        return a @ b if self.mode == FLOAT else linalg.matmul(a, b)

    def as_float(self) -> "UnitaryRep":
        if self.mode == FLOAT:
            return self
        gens = {k: to_numpy(m) for k, m in self.generators.items()}
        return UnitaryRep(self.n, gens, FLOAT, self.tol)


def to_numpy(m) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in m], dtype=complex)


def _residual(diff) -> Fraction | float:
    """Max-entry modulus of ``diff`` (squared modulus in exact mode, to stay rational)."""
    if isinstance(diff, np.ndarray):
        return float(np.max(np.abs(diff))) if diff.size else 0.0
    return max((x.norm_sq() for row in diff for x in row), default=Fraction(0))


@dataclass(frozen=True)
class CheckReport:
    kind: str
    mode: str
    residuals: dict
    passed: bool
    tol: float = DEFAULT_TOL

    def to_json(self) -> dict:
        return {
            "check": self.kind,
            "mode": self.mode,
            "tol": 0 if self.mode == EXACT else self.tol,
            "residuals": {k: str(v) if self.mode == EXACT else v for k, v in self.residuals.items()},
            "pass": self.passed,
        }


def _within(res, mode: str, tol: float) -> bool:
    return res == 0 if mode == EXACT else res <= tol


def check_unitary(rep: UnitaryRep, tol: float | None = None) -> CheckReport:
    """Residual ``max |U U^dagger - I|`` per generator (exact mode reports ``|.|^2``)."""
    tol = rep.tol if tol is None else tol
    res = {}
    for name, m in rep.generators.items():
        if rep.mode == FLOAT:
            diff = m @ m.conj().T - np.eye(rep.n)
        else:
            diff = linalg.sub(linalg.matmul(m, linalg.adjoint(m)), linalg.identity(rep.n))
        res[name] = _residual(diff)
    return CheckReport("unitary", rep.mode, res, all(_within(r, rep.mode, tol) for r in res.values()), tol)


def check_relations(rep: UnitaryRep, pres: GroupPresentation, tol: float | None = None) -> CheckReport:
    tol = rep.tol if tol is None else tol
    if set(pres.generators) != set(rep.generators):
        raise DimensionMismatch("representation and presentation have different generators")
    res = {}
    for w in pres.relators:
        val = rep.evaluate(w)
        diff = val - np.eye(rep.n) if rep.mode == FLOAT else linalg.sub(val, linalg.identity(rep.n))
        res[w] = _residual(diff)
    return CheckReport("relations", rep.mode, res, all(_within(r, rep.mode, tol) for r in res.values()), tol)


def clock_shift(n: int, mode: str | None = None) -> UnitaryRep:
    """Clock ``a`` and shift ``b`` with commutator a primitive n-th root of unity.

    Determinant-normalized (in SU(n)) whenever the normalizing scalar is
    available.  Exact arithmetic is possible for n = 2 and, without the
    determinant normalization, for n = 4; every other n runs in floating point.
    """
    if not isinstance(n, int) or n < 2:
        raise InvalidRank(f"clock-shift needs n >= 2, got {n!r}")
    if mode is None:
        mode = EXACT if n == 2 else FLOAT
    if mode == EXACT:
        if n == 2:
            a = [[I, ZERO], [ZERO, -I]]
            b = [[ZERO, I], [I, ZERO]]
        elif n == 4:
            powers = [ONE, I, -ONE, -I]
            a = [[powers[i] if i == j else ZERO for j in range(4)] for i in range(4)]
            b = [[ONE if i == (j + 1) % 4 else ZERO for j in range(4)] for i in range(4)]
        else:
            raise InvalidRank(f"roots of unity of order {n} are not in Q(i); use floating mode")
        return UnitaryRep(n, {"a": a, "b": b}, EXACT)
    zeta = cmath.exp(2j * cmath.pi / n)
    a = np.diag([zeta**k for k in range(n)])
    b = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    # both have determinant (-1)^(n-1); a fixed n-th root of it normalizes them
    norm = cmath.exp(1j * cmath.pi * (n - 1) / n) if n % 2 == 0 else 1.0
    return UnitaryRep(n, {"a": a / norm, "b": b / norm}, FLOAT)


def determinant(m) -> complex | GaussRational:
    if isinstance(m, np.ndarray):
        return complex(np.linalg.det(m))
    return linalg.det(m)


def commutant(rep: UnitaryRep, tol: float | None = None) -> tuple[int, list]:
    """Dimension and basis of ``{X : X U = U X for every generator}``."""
    tol = rep.tol if tol is None else tol
    n = rep.n
    if rep.mode == EXACT:
        rows = []
        for m in rep.generators.values():
            for i in range(n):
                for j in range(n):
                    row = [ZERO] * (n * n)
                    for k in range(n):
                        row[i * n + k] = row[i * n + k] + m[k][j]
                        row[k * n + j] = row[k * n + j] - m[i][k]
                    rows.append(row)
        basis = linalg.nullspace(rows, n * n)
        return len(basis), [[v[i * n : (i + 1) * n] for i in range(n)] for v in basis]
    ident = np.eye(n)
    blocks = [np.kron(ident, m.T) - np.kron(m, ident) for m in rep.generators.values()]
    if not blocks:
        return n * n, [np.eye(n * n)[k].reshape(n, n) for k in range(n * n)]
    M = np.vstack(blocks)
    _, s, vh = np.linalg.svd(M)
    scale = max(1.0, float(s[0]) if s.size else 1.0)
    hi = np.sqrt(tol) * scale
    lo = tol * scale
    ambiguous = [float(x) for x in s if lo < x < hi]
    if ambiguous:
        raise IndeterminateRank(
            f"singular values {ambiguous} fall in the gap ({lo:.3g}, {hi:.3g})", [float(x) for x in s]
        )
    null = [k for k, x in enumerate(s) if x <= lo] + list(range(len(s), n * n))
    return len(null), [vh[k].conj().reshape(n, n) for k in null]


# --- flat bundles and degree ---------------------------------------------------------------


@dataclass(frozen=True)
class FlatBundle:
    """Flat bundle from a unitary representation; the connection form vanishes in the flat frame."""

    rep: UnitaryRep
    frame: Coframe

    @property
    def rank(self) -> int:
        return self.rep.n

    @property
    def theta(self) -> tuple:
        z = self.frame.zero()
        return tuple(tuple(z for _ in range(self.rank)) for _ in range(self.rank))

    def curvature(self) -> CurvatureTensor:
        return curvature(self)

    @property
    def c1_form(self) -> InvariantForm:
        return self.curvature().trace()


def degree(alpha: InvariantForm, omega: InvariantForm) -> GaussRational:
    """``integral of alpha ^ omega^2`` with the total volume normalized to 1."""
    if alpha.degrees() - {2}:
        raise DimensionMismatch("degree needs an invariant 2-form")
    vol = top_coefficient(power(omega, 3)) / 6
    if not vol:
        raise DimensionMismatch("omega is degenerate")
    return top_coefficient(wedge(alpha, power(omega, 2))) / vol


def stability_report(bundle: FlatBundle, omega: InvariantForm) -> dict:
    unitary = check_unitary(bundle.rep)
    dim, _ = commutant(bundle.rep)
    deg = degree(bundle.c1_form, omega)
    verdict = STABLE if dim == 1 and unitary.passed else INAPPLICABLE
    return {
        "mode": bundle.rep.mode,
        "rank": bundle.rank,
        "unitary": unitary.passed,
        "degree": str(deg),
        "commutant_dim": dim,
        "verdict": verdict,
        "basis": "irreducible unitary flat bundles are stable; no subsheaf search is performed",
    }


# --- JSON descriptors ------------------------------------------------------------------------


def _parse_entry(x, mode: str):
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise StromverError(f"matrix entry {x!r} is not a [re, im] pair")
        re_, im_ = x
    else:
        if mode == EXACT:
            return gr(str(x)) if not isinstance(x, int) else gr(x)
        return complex(x)
    if mode == EXACT:
        if isinstance(re_, float) or isinstance(im_, float):
            raise StromverError("exact descriptors need integer or fraction-string entries")
        return GaussRational(Fraction(re_), Fraction(im_))
    return complex(float(Fraction(str(re_))), float(Fraction(str(im_))))


def load_rep(source) -> tuple[UnitaryRep, GroupPresentation]:
    """Parse ``{"n", "mode", "generators": {"a": [[[re, im], ...], ...]}, "relators"}``."""
    data = json.loads(source) if isinstance(source, str) else dict(source)
    try:
        n = int(data["n"])
        mode = data.get("mode", EXACT)
        tol = float(data.get("tol", DEFAULT_TOL))
        gens = {}
        for name, rows in data["generators"].items():
            mat = [[_parse_entry(x, mode) for x in row] for row in rows]
            gens[name] = np.array(mat, dtype=complex) if mode == FLOAT else mat
        relators = tuple(data.get("relators", ()))
    except (KeyError, TypeError, ValueError) as exc:
        raise StromverError(f"malformed representation descriptor: {exc}") from exc
    if n < 1:
        raise InvalidRank(f"rank must be positive, got {n}")
    pres = GroupPresentation(tuple(gens), relators, is_free=not relators)
    return UnitaryRep(n, gens, mode, tol), pres


def rep_to_json(rep: UnitaryRep) -> dict:
    def enc(x):
        if rep.mode == EXACT:
            return [str(x.re), str(x.im)]
        return [float(x.real), float(x.imag)]

    return {
        "n": rep.n,
        "mode": rep.mode,
        "generators": {k: [[enc(x) for x in row] for row in m] for k, m in rep.generators.items()},
    }
