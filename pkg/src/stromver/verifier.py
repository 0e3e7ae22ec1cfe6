"""Exact verification of the heterotic system on invariant data.

All fields are right-invariant, so every identity is checked on constant
coefficients at the identity coset.  The five equations are reported under
descriptive ids:

    hermitian_yang_mills   F^{2,0} = F^{0,2} = 0 and F ^ ω² = 0
    dilatino               d*ω = i(∂̄ - ∂)‖Ω‖  (also with ln‖Ω‖)
    conformally_balanced   d(‖Ω‖ ω²) = 0
    anomaly_cancellation   i∂∂̄ω = α'(tr R^R - tr F^F), solved for α'
    equation_of_motion     R^{2,0} = R^{0,2} = 0 and R ^ ω² = 0
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .bundles import FlatBundle, clock_shift, load_rep, stability_report
from .connections import (
    CurvatureTensor,
    InvariantConnection,
    bismut_connection,
    chern_connection,
    curvature,
    gauduchon_family,
    holonomy_algebra,
    su3_containment,
    torsion,
    torsion_skew_check,
    trace_r_wedge_r,
)
from .errors import InvalidInstance
from .forms import (
    RIGHT_INVARIANT,
    Coframe,
    InvariantForm,
    TopFormSection,
    ce_differential,
    codifferential,
    del_,
    delbar,
    form_to_vector,
    hodge_star,
    kaehler_form,
    omega_norm,
    power,
    proportionality,
    to_json as form_json,
    top_coefficient,
    volume_coefficient,
    wedge,
)
from .lie import DaggerMap, HermitianForm, LieAlgebraData, abelian, is_sl2, load_algebra, sl2_standard
from .reps import build_module, invariant_subspace, locate_invariant
from .scalars import I, ONE, ZERO, GaussRational, gr

log = logging.getLogger(__name__)

EQUATIONS = (
    "hermitian_yang_mills",
    "dilatino",
    "conformally_balanced",
    "anomaly_cancellation",
    "equation_of_motion",
)

PASS, FAIL, CONDITIONAL, NO_SOLUTION = "pass", "fail", "conditional", "no_solution"

ANOMALY_NOTE = (
    "i∂∂̄ω is a nonzero multiple of ω² while tr(R^R) - tr(F^F) vanishes identically: "
    "both sides are multiples of ω², but the multiples differ, so no α' solves the anomaly "
    "equation for this pair of connections."
)


@dataclass(frozen=True)
class BundleConnection:
    """Invariant connection on an auxiliary trivial bundle, given by its matrix of 1-forms."""

    frame: Coframe
    theta: tuple

    @property
    def rank(self) -> int:
        return len(self.theta)

    def curvature(self) -> CurvatureTensor:
        return curvature(self)


@dataclass(frozen=True)
class StromingerInstance:
    algebra: LieAlgebraData
    h: HermitianForm
    dagger: DaggerMap
    frame: Coframe
    omega_section: TopFormSection
    tangent: InvariantConnection
    bundle: object  # FlatBundle or BundleConnection
    alpha_prime: GaussRational | None = None
    curvature_override: CurvatureTensor | None = None
    label: str = "custom"

    def __post_init__(self) -> None:
        if not self.omega_section.coefficient:
            raise InvalidInstance("holomorphic volume form must be nonzero")
        if self.frame.algebra is not self.algebra and self.frame.algebra != self.algebra:
            raise InvalidInstance("frame and algebra disagree")
        if self.tangent.frame != self.frame or self.bundle.frame != self.frame:
            raise InvalidInstance("connections live on a different frame")
        rank = self.bundle.rank
        if rank < 1:
            raise InvalidInstance("bundle rank must be positive")

    @property
    def omega(self) -> InvariantForm:
        return kaehler_form(self.frame, self.h)

    def tangent_curvature(self) -> CurvatureTensor:
        return self.curvature_override if self.curvature_override is not None else curvature(self.tangent)

    def bundle_curvature(self) -> CurvatureTensor:
        return curvature(self.bundle)


# --- instance builders ----------------------------------------------------------------------


def tangent_connection(frame: Coframe, h: HermitianForm, name: str = "chern") -> InvariantConnection:
    """``chern``, ``bismut`` or ``gauduchon:<t>``."""
    if name == "chern":
        return chern_connection(frame, h)
    if name == "bismut":
        return bismut_connection(frame, h)
    if name.startswith("gauduchon:"):
        return gauduchon_family(frame, h, gr(name.split(":", 1)[1]))
    raise InvalidInstance(f"unknown connection {name!r}")


def canonical_instance(
    sign: int = RIGHT_INVARIANT,
    connection: str = "chern",
    alpha_prime=None,
    scale=1,
) -> StromingerInstance:
    """sl(2,C), ``h = diag(2,1,1)`` (times ``scale``), unit Ω and the clock-shift flat bundle."""
    g, h, d = sl2_standard()
    h = h.scaled(gr(scale))
    F = Coframe(g, sign)
    return StromingerInstance(
        algebra=g,
        h=h,
        dagger=d,
        frame=F,
        omega_section=TopFormSection(ONE),
        tangent=tangent_connection(F, h, connection),
        bundle=FlatBundle(clock_shift(2), F),
        alpha_prime=None if alpha_prime is None else gr(alpha_prime),
        label="sl2",
    )


def abelian_instance(sign: int = RIGHT_INVARIANT, alpha_prime=None) -> StromingerInstance:
    g, h, d = abelian(3)
    F = Coframe(g, sign)
    return StromingerInstance(
        algebra=g,
        h=h,
        dagger=d,
        frame=F,
        omega_section=TopFormSection(ONE),
        tangent=chern_connection(F, h),
        bundle=FlatBundle(clock_shift(2), F),
        alpha_prime=None if alpha_prime is None else gr(alpha_prime),
        label="abelian",
    )


def load_instance(data: dict, sign: int = RIGHT_INVARIANT, connection: str | None = None, alpha_prime=None):
    """Instance from ``{"algebra": {...}, "omega": "1", "connection": "chern", "bundle": {...}, "alpha_prime": ...}``."""
    try:
        g, h, d = load_algebra(data["algebra"])
        F = Coframe(g, sign)
        conn = connection or data.get("connection", "chern")
        bundle_data = data.get("bundle")
        if bundle_data is None:
            rep = clock_shift(2)
        else:
            rep, _ = load_rep(bundle_data)
        ap = alpha_prime if alpha_prime is not None else data.get("alpha_prime")
        omega_c = gr(str(data.get("omega", "1")))
    except (KeyError, TypeError) as exc:
        raise InvalidInstance(f"malformed instance descriptor: missing or invalid {exc}") from exc
    return StromingerInstance(
        algebra=g,
        h=h,
        dagger=d,
        frame=F,
        omega_section=TopFormSection(omega_c),
        tangent=tangent_connection(F, h, conn),
        bundle=FlatBundle(rep, F),
        alpha_prime=None if ap is None else gr(ap),
        label=data.get("name", g.name),
    )


# --- helpers ---------------------------------------------------------------------------------


def _matrix_json(m) -> list:
    return [[form_json(f) for f in row] for row in m]


def _nonzero_entries(m) -> list[str]:
    return [f"[{i}][{j}]" for i, row in enumerate(m) for j, f in enumerate(row) if not f.is_zero()]


def _trace_f_wedge_f(F: CurvatureTensor) -> InvariantForm:
    return trace_r_wedge_r(F)


def _sq(x: GaussRational | None) -> str | None:
    return None if x is None else str(x)


# --- the five equations --------------------------------------------------------------------------


def verify_hermitian_yang_mills(inst: StromingerInstance) -> dict:
    F = inst.bundle_curvature()
    w2 = power(inst.omega, 2)
    f20 = F.part(2, 0)
    f02 = F.part(0, 2)
    fw = F.wedge_form(w2)
    offending = {
        "F20": _nonzero_entries(f20.forms),
        "F02": _nonzero_entries(f02.forms),
        "F_wedge_omega2": _nonzero_entries(fw),
    }
    ok = not any(offending.values())
    return {
        "equation": "hermitian_yang_mills",
        "verdict": PASS if ok else FAIL,
        "curvature_zero": F.is_zero(),
        "offending": {k: v for k, v in offending.items() if v},
    }


def verify_dilatino(inst: StromingerInstance) -> dict:
    w = inst.omega
    lhs = codifferential(w, inst.h)
    # second path: star(omega) = omega^2 / 2 and d(omega^2) = 0 force d*omega = 0
    star_w = hodge_star(w, inst.h)
    star_ratio = proportionality(star_w, power(w, 2))
    closed_w2 = ce_differential(power(w, 2)).is_zero()
    norm = omega_norm(inst.omega_section, inst.h)
    # the norm is constant, so every derivative of it (or of its log) vanishes
    rhs_plain = inst.frame.zero()
    rhs_log = inst.frame.zero()
    residual = lhs - rhs_plain
    ok = residual.is_zero() and (lhs - rhs_log).is_zero()
    return {
        "equation": "dilatino",
        "verdict": PASS if ok else FAIL,
        "lhs": form_json(lhs),
        "rhs": form_json(rhs_plain),
        "rhs_log_reading": form_json(rhs_log),
        "residual": form_json(residual),
        "omega_norm": str(norm),
        "star_omega_over_omega2": _sq(star_ratio),
        "omega2_closed": closed_w2,
    }


def verify_conformally_balanced(inst: StromingerInstance) -> dict:
    norm = omega_norm(inst.omega_section, inst.h)
    lhs = ce_differential(power(inst.omega, 2)) * norm
    return {
        "equation": "conformally_balanced",
        "verdict": PASS if lhs.is_zero() else FAIL,
        "omega_norm": str(norm),
        "residual": form_json(lhs),
    }


def _in_invariant_line(inst: StromingerInstance, form: InvariantForm) -> bool | None:
    if not is_sl2(inst.algebra):
        return None
    m = build_module("wedge4(dual(g+gbar))")
    found, _ = locate_invariant(m, form_to_vector(form, 4))
    return found


def anomaly_constants(inst: StromingerInstance) -> dict:
    """``i∂∂̄ω``, ``tr R^R``, ``tr F^F`` and their ω²-multiples."""
    w = inst.omega
    w2 = power(w, 2)
    lhs = I * del_(delbar(w))
    trr = trace_r_wedge_r(inst.tangent_curvature())
    trf = _trace_f_wedge_f(inst.bundle_curvature())
    return {
        "lhs": lhs,
        "trr": trr,
        "trf": trf,
        "c_lhs": proportionality(lhs, w2),
        "c_r": proportionality(trr, w2),
        "c_f": proportionality(trf, w2),
    }


def verify_anomaly_cancellation(inst: StromingerInstance) -> dict:
    k = anomaly_constants(inst)
    lhs, rhs_unit = k["lhs"], k["trr"] - k["trf"]
    a = form_to_vector(lhs, 4)
    b = form_to_vector(rhs_unit, 4)
    if rhs_unit.is_zero():
        solution = {"kind": "all"} if lhs.is_zero() else {"kind": "none"}
    else:
        coeffs = linalg.solve_in_span([b], a)
        solution = {"kind": "unique", "alpha_prime": str(coeffs[0])} if coeffs else {"kind": "none"}
    entry = {
        "equation": "anomaly_cancellation",
        "constants": {"c_lhs": _sq(k["c_lhs"]), "c_r": _sq(k["c_r"]), "c_f": _sq(k["c_f"])},
        "omega2_multiples": {
            "lhs": k["c_lhs"] is not None,
            "trr": k["c_r"] is not None,
            "trf": k["c_f"] is not None,
        },
        "invariant_line": {
            "lhs": _in_invariant_line(inst, lhs),
            "trr": _in_invariant_line(inst, k["trr"]),
            "trf": _in_invariant_line(inst, k["trf"]),
        },
        "lhs": form_json(lhs),
        "rhs_per_unit_alpha": form_json(rhs_unit),
        "alpha_prime_solutions": solution,
    }
    if inst.alpha_prime is not None:
        residual = lhs - rhs_unit * inst.alpha_prime
        entry["alpha_prime"] = str(inst.alpha_prime)
        entry["residual"] = form_json(residual)
        entry["verdict"] = PASS if residual.is_zero() else FAIL
    elif solution["kind"] == "all":
        entry["verdict"] = PASS
    elif solution["kind"] == "unique":
        entry["verdict"] = CONDITIONAL
    else:
        entry["verdict"] = NO_SOLUTION
    if solution["kind"] == "none" and rhs_unit.is_zero():
        entry["note"] = ANOMALY_NOTE
    return entry


def _scalar_multiple_of_identity(m) -> GaussRational | None:
    r = len(m)
    lam = m[0][0] if r else ZERO
    for i in range(r):
        for j in range(r):
            if m[i][j] != (lam if i == j else ZERO):
                return None
    return lam


def verify_equation_of_motion(inst: StromingerInstance) -> dict:
    R = inst.tangent_curvature()
    w2 = power(inst.omega, 2)
    r20, r02 = R.part(2, 0), R.part(0, 2)
    rw = R.wedge_form(w2)
    # star path: star(R ^ omega^2) is an endomorphism of constants
    star = [[top_coefficient(f) / volume_coefficient(inst.frame, inst.h) for f in row] for row in rw]
    lam_star = _scalar_multiple_of_identity(star)
    identity_line = None
    if is_sl2(inst.algebra) and R.rank == 3:
        flat = [x for row in star for x in row]
        identity_line = True if not any(flat) else locate_invariant(build_module("end(g)"), flat)[0]
    # volume path: integral of tr(R) ^ omega^2 over a unit-volume quotient, divided by the rank
    tr = R.trace()
    lam_vol = top_coefficient(wedge(tr, w2)) / (volume_coefficient(inst.frame, inst.h) * R.rank)
    trace_exact = None
    if inst.curvature_override is None:
        tr_theta = inst.frame.zero()
        for i in range(R.rank):
            tr_theta = tr_theta + inst.tangent.theta[i][i]
        trace_exact = (tr - ce_differential(tr_theta)).is_zero()
    paths_agree = lam_star is not None and lam_star == lam_vol
    checks = {
        "R20_zero": r20.is_zero(),
        "R02_zero": r02.is_zero(),
        "R_wedge_omega2_zero": all(f.is_zero() for row in rw for f in row),
    }
    ok = all(checks.values()) and paths_agree and lam_star == 0
    return {
        "equation": "equation_of_motion",
        "verdict": PASS if ok else FAIL,
        "checks": checks,
        "offending": {
            "R20": _nonzero_entries(r20.forms),
            "R02": _nonzero_entries(r02.forms),
            "R_wedge_omega2": _nonzero_entries(rw),
        },
        "lambda_star": _sq(lam_star),
        "lambda_volume": str(lam_vol),
        "lambda_paths_agree": paths_agree,
        "star_in_identity_line": identity_line,
        "trace_R_exact": trace_exact,
    }


VERIFIERS = {
    "hermitian_yang_mills": verify_hermitian_yang_mills,
    "dilatino": verify_dilatino,
    "conformally_balanced": verify_conformally_balanced,
    "anomaly_cancellation": verify_anomaly_cancellation,
    "equation_of_motion": verify_equation_of_motion,
}


# --- full report ------------------------------------------------------------------------------


def supporting_checks(inst: StromingerInstance) -> dict:
    w = inst.omega
    out = {
        "d_omega_zero": ce_differential(w).is_zero(),
        "d_omega2_zero": ce_differential(power(w, 2)).is_zero(),
    }
    out["kaehler"] = out["d_omega_zero"]
    if is_sl2(inst.algebra):
        out["invariant_1forms_dim"] = len(invariant_subspace(build_module("dual(g+gbar)")))
        out["invariant_4forms_dim"] = len(invariant_subspace(build_module("wedge4(dual(g+gbar))")))
        skew = torsion_skew_check(torsion(inst.tangent), inst.h, inst.dagger)
        out["torsion_identified_skew"] = skew.skew
        out["torsion_raw_skew"] = skew.raw_skew
        hol = holonomy_algebra(inst.tangent)
        out["holonomy_dim"] = len(hol)
        out["holonomy_in_su3"] = su3_containment(hol, inst.h)
    if isinstance(inst.bundle, FlatBundle):
        out["bundle"] = stability_report(inst.bundle, w)
    return out


@dataclass
class VerificationReport:
    instance: str
    sign: int
    connection: str
    entries: list = field(default_factory=list)
    supporting: dict = field(default_factory=dict)

    @property
    def verdicts(self) -> dict:
        return {e["equation"]: e["verdict"] for e in self.entries}

    @property
    def exit_code(self) -> int:
        v = set(self.verdicts.values())
        if FAIL in v:
            return 1
        if NO_SOLUTION in v:
            return 3
        return 0

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "sign": self.sign,
            "connection": self.connection,
            "equations": self.entries,
            "supporting": self.supporting,
            "exit_code": self.exit_code,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"instance {self.instance} (sign {self.sign:+d}, connection {self.connection})"]
        for e in self.entries:
            extra = ""
            if e["equation"] == "anomaly_cancellation":
                c = e["constants"]
                extra = f"  c_lhs={c['c_lhs']} c_r={c['c_r']} c_f={c['c_f']} alpha'={e['alpha_prime_solutions']}"
            if e["equation"] == "equation_of_motion":
                extra = f"  lambda={e['lambda_star']}/{e['lambda_volume']}"
            lines.append(f"  {e['equation']:<22} {e['verdict']}{extra}")
            if "note" in e:
                lines.append(f"    note: {e['note']}")
        for k, v in self.supporting.items():
            lines.append(f"  [{k}] {v}")
        return "\n".join(lines)


def full_report(inst: StromingerInstance, equations: Sequence[str] = EQUATIONS) -> VerificationReport:
    rep = VerificationReport(inst.label, inst.frame.sign, inst.tangent.kind)
    for eq in equations:
        log.debug("checking %s", eq)
        rep.entries.append(VERIFIERS[eq](inst))
    rep.supporting = supporting_checks(inst)
    return rep


def synthetic_curvature(inst: StromingerInstance, form: InvariantForm | None = None) -> CurvatureTensor:
    """``R = form * Id`` (default ``ω * Id``); not the curvature of any connection."""
    form = inst.omega if form is None else form
    r = inst.tangent.n
    z = inst.frame.zero()
    return CurvatureTensor(inst.frame, tuple(tuple(form if i == j else z for j in range(r)) for i in range(r)))

