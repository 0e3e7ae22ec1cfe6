"""Acceptance matrix: one row per release criterion, each an exact check.

``run_acceptance`` is shared by ``stromver selftest`` and the pytest
acceptance module.  Rows never raise; an unexpected exception is a failed
row with the exception text as detail.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable

from . import linalg
from .bundles import INAPPLICABLE, STABLE, FlatBundle, UnitaryRep, check_unitary, clock_shift, commutant, degree, stability_report
from .connections import chern_connection, holonomy_algebra, su3_containment, torsion, torsion_skew_check
from .forms import (
    FLIPPED,
    RIGHT_INVARIANT,
    Coframe,
    InvariantForm,
    ce_differential,
    form_to_vector,
    hodge_star,
    kaehler_form,
    power,
    wedge,
)
from .lie import sl2_standard
from .reps import build_module, commutation_residuals, decompose, invariant_subspace, locate_invariant
from .scalars import I, ONE, ZERO, GaussRational
from .verifier import (
    NO_SOLUTION,
    PASS,
    abelian_instance,
    anomaly_constants,
    canonical_instance,
    full_report,
    verify_anomaly_cancellation,
)

# i∂∂̄ω / ω² for h = diag(2,1,1), from an independent symbolic expansion
# (tests/oracles.py recomputes it with sympy).
ORACLE_C_LHS = GaussRational(2)

MODULE_RECIPES = (
    "V0",
    "g",
    "gbar",
    "sym2(V0)",
    "wedge2(sym2(V0))",
    "sym2(V0) * sym2(V0)",
    "dual(g + gbar)",
    "wedge4(dual(g + gbar))",
    "wedge5(dual(g + gbar))",
    "wedge2(g + gbar)",
    "end(g)",
    "wedge2(g) * g",
    "wedge2(gbar) * g",
)


@dataclass(frozen=True)
class Row:
    key: str
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.key:<3} {self.title}: {self.detail}"


def _frame(sign: int) -> tuple:
    g, h, d = sl2_standard()
    return g, h, d, Coframe(g, sign)


def random_scalar(rng: random.Random, bound: int = 9) -> GaussRational:
    def q():
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    return GaussRational(q(), q())


def random_form(rng: random.Random, frame: Coframe, degree: int, terms: int = 4) -> InvariantForm:
    keys = frame.basis(degree)
    return InvariantForm(frame, {rng.choice(keys): random_scalar(rng) for _ in range(terms)})


# --- rows ------------------------------------------------------------------------------------


def row_1(sign: int) -> tuple[bool, str]:
    dim = len(invariant_subspace(build_module("dual(g + gbar)")))
    return dim == 0, f"invariant 1-forms dim {dim}"


def row_2(sign: int) -> tuple[bool, str]:
    g, h, d, F = _frame(sign)
    m = build_module("wedge4(dual(g + gbar))")
    dim = len(invariant_subspace(m))
    w2 = form_to_vector(power(kaehler_form(F, h), 2), 4)
    found, c = locate_invariant(m, w2)
    ok = dim == 1 and found and c is not None and bool(c)
    return ok, f"invariant 4-forms dim {dim}; omega^2 located={found} scalar={c}"


def row_3(sign: int) -> tuple[bool, str]:
    g, h, d, F = _frame(sign)
    out = []
    ok = True
    for lam in (1, 2, Fraction(1, 3)):
        w = kaehler_form(F, h.scaled(lam))
        closed2 = ce_differential(power(w, 2)).is_zero()
        open1 = not ce_differential(w).is_zero()
        ok &= closed2 and open1
        out.append(f"λ={lam}: d(ω²)=0 {closed2}, dω≠0 {open1}")
    return ok, "; ".join(out)


def row_4(sign: int) -> tuple[bool, str]:
    g, h, d, F = _frame(sign)
    chern = chern_connection(F, h)
    skew = torsion_skew_check(torsion(chern), h, d)
    d1 = decompose(build_module("wedge2(sym2(V0))")).irreps
    d2 = decompose(build_module("sym2(V0) * sym2(V0)")).irreps
    hol = holonomy_algebra(chern)
    su3 = su3_containment(hol, h)
    ok = skew.skew and d1 == {2: 1} and d2 == {0: 1, 2: 1, 4: 1} and hol == [] and su3
    return ok, f"skew(ŝ)={skew.skew} skew(s)={skew.raw_skew}; ∧²Sym²={d1}; Sym²⊗Sym²={d2}; hol dim {len(hol)}; su3 {su3}"


def row_5(sign: int) -> tuple[bool, str]:
    rep = full_report(canonical_instance(sign))
    v = rep.verdicts
    eom = next(e for e in rep.entries if e["equation"] == "equation_of_motion")
    need = ("hermitian_yang_mills", "dilatino", "conformally_balanced", "equation_of_motion")
    lam_ok = eom["lambda_star"] == "0" and eom["lambda_volume"] == "0" and eom["lambda_paths_agree"]
    ok = all(v[k] == PASS for k in need) and lam_ok
    return ok, ", ".join(f"{k}={v[k]}" for k in need) + f"; λ star={eom['lambda_star']} volume={eom['lambda_volume']}"


def row_6a(sign: int) -> tuple[bool, str]:
    inst = canonical_instance(sign)
    k = anomaly_constants(inst)
    entry = verify_anomaly_cancellation(inst)
    ok = (
        k["c_r"] == 0
        and k["c_f"] == 0
        and k["c_lhs"] is not None
        and bool(k["c_lhs"])
        and k["c_lhs"] == ORACLE_C_LHS
        and entry["verdict"] == NO_SOLUTION
        and "note" in entry
    )
    return ok, f"(c_lhs, c_r, c_f) = ({k['c_lhs']}, {k['c_r']}, {k['c_f']}); oracle {ORACLE_C_LHS}; verdict {entry['verdict']}"


def row_6b(sign: int) -> tuple[bool, str]:
    """c_lhs under the flipped d-sign must be the negative of the default one."""
    a = anomaly_constants(canonical_instance(RIGHT_INVARIANT))["c_lhs"]
    b = anomaly_constants(canonical_instance(FLIPPED))["c_lhs"]
    ok = a is not None and b is not None and b == -a
    return ok, f"c_lhs default {a}, flipped {b} (i∂∂̄ω is quadratic in d, so it cannot change sign)"


def row_7(sign: int) -> tuple[bool, str]:
    g, h, d, F = _frame(sign)
    w = kaehler_form(F, h)
    cs = clock_shift(2)
    unit = check_unitary(cs)
    rep = stability_report(FlatBundle(cs, F), w)
    split = UnitaryRep(2, {"a": [[I, ZERO], [ZERO, -ONE]], "b": [[ONE, ZERO], [ZERO, -I]]})
    rep2 = stability_report(FlatBundle(split, F), w)
    ok = (
        all(r == 0 for r in unit.residuals.values())
        and rep["commutant_dim"] == 1
        and rep["degree"] == "0"
        and rep["verdict"] == STABLE
        and rep2["commutant_dim"] >= 2
        and rep2["verdict"] == INAPPLICABLE
    )
    return ok, (
        f"clock-shift: residuals {[str(r) for r in unit.residuals.values()]}, commutant {rep['commutant_dim']}, "
        f"degree {rep['degree']}, {rep['verdict']}; split: commutant {rep2['commutant_dim']}, {rep2['verdict']}"
    )


def row_8(sign: int, trials: int = 20, seed: int = 8) -> tuple[bool, str]:
    g, h, d, F = _frame(sign)
    w = kaehler_form(F, h)
    rng = random.Random(seed)
    alpha = I * wedge(F.sigma(1), F.sigma_bar(1))
    base = degree(alpha, w)
    bad = 0
    for _ in range(trials):
        delta = random_form(rng, F, 1, terms=3)
        if degree(alpha + ce_differential(delta), w) != base:
            bad += 1
    return bad == 0, f"degree(α)={base}; {trials - bad}/{trials} shifted degrees equal"


def row_9(sign: int, seed: int = 9) -> tuple[bool, str]:
    g, h, d, F = _frame(sign)
    rng = random.Random(seed)
    keys = [k for deg in range(F.rank + 1) for k in F.basis(deg)]
    d2 = all(ce_differential(ce_differential(F.monomial(k))).is_zero() for k in keys)
    leib = True
    for _ in range(100):
        p, q = rng.randint(0, 3), rng.randint(0, 3)
        a, b = random_form(rng, F, p), random_form(rng, F, q)
        lhs = ce_differential(wedge(a, b))
        rhs = wedge(ce_differential(a), b) + wedge(a, ce_differential(b)) * (-1) ** p
        leib &= lhs == rhs
    starstar = all(
        hodge_star(hodge_star(F.monomial(k), h), h) == F.monomial(k) * (-1) ** len(k) for k in keys
    )
    field = True
    for _ in range(1000):
        x, y, z = random_scalar(rng), random_scalar(rng), random_scalar(rng)
        field &= (x + y) * z == x * z + y * z and x * (y * z) == (x * y) * z and x + (-x) == ZERO
        if x:
            field &= x * x.inv() == ONE
    su2 = all(not commutation_residuals(build_module(r)) for r in MODULE_RECIPES)
    ok = d2 and leib and starstar and field and su2
    return ok, f"d²=0 {d2} ({len(keys)} generators); Leibniz {leib}; ⋆⋆=±1 {starstar}; field {field}; su(2) relations {su2}"


def row_10(sign: int) -> tuple[bool, str]:
    rep = full_report(abelian_instance(sign))
    anomaly = next(e for e in rep.entries if e["equation"] == "anomaly_cancellation")
    all_pass = all(v == PASS for v in rep.verdicts.values())
    unconstrained = anomaly["alpha_prime_solutions"]["kind"] == "all"
    kahler = rep.supporting["d_omega_zero"]
    g, h, d, F = _frame(sign)
    non_kahler = not ce_differential(kaehler_form(F, h)).is_zero()
    ok = all_pass and unconstrained and kahler and non_kahler
    return ok, f"abelian: all pass {all_pass}, α' unconstrained {unconstrained}, dω=0 {kahler}; sl2 dω≠0 {non_kahler}"


ROWS: tuple[tuple[str, str, Callable], ...] = (
    ("1", "no invariant 1-forms", row_1),
    ("2", "invariant 4-forms are the ω² line", row_2),
    ("3", "ω² closed, ω not closed, under scaling", row_3),
    ("4", "skew torsion, decompositions, Chern holonomy", row_4),
    ("5", "four equations exact, λ = 0 two ways", row_5),
    ("6a", "anomaly constants vs oracle", row_6a),
    ("6b", "anomaly constant flips with the d-sign", row_6b),
    ("7", "clock-shift bundle pipeline", row_7),
    ("8", "degree invariant under exact shifts", row_8),
    ("9", "structural property suites", row_9),
    ("10", "abelian Kähler control", row_10),
)


def run_row(key: str, sign: int = RIGHT_INVARIANT) -> Row:
    for k, title, fn in ROWS:
        if k == key:
            try:
                ok, detail = fn(sign)
            except Exception as exc:  # a crashing row is a failing row
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            return Row(k, title, bool(ok), detail)
    raise KeyError(key)


def run_acceptance(sign: int = RIGHT_INVARIANT) -> list[Row]:
    return [run_row(k, sign) for k, _, _ in ROWS]
