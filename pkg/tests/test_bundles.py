import cmath
import json

import numpy as np
import pytest
from hypothesis import given

from conftest import gauss
from stromver.bundles import (
    EXACT,
    FLOAT,
    INAPPLICABLE,
    STABLE,
    FlatBundle,
    GroupPresentation,
    UnitaryRep,
    check_relations,
    check_unitary,
    clock_shift,
    commutant,
    degree,
    determinant,
    load_rep,
    rep_to_json,
    stability_report,
)
from stromver.errors import DimensionMismatch, IndeterminateRank, InvalidRank, StromverError
from stromver.forms import Coframe, ce_differential, kaehler_form, wedge
from stromver.lie import sl2_standard
from stromver.scalars import I, ONE, ZERO, gr

G, H, _ = sl2_standard()
F = Coframe(G)
OMEGA = kaehler_form(F, H)
QUATERNION = GroupPresentation(("a", "b"), ("aaaa", "aaBB", "abaB"))


def test_clock_shift_two_is_exact_and_irreducible():
    rep = clock_shift(2)
    assert rep.mode == EXACT
    assert rep.generators["a"] == [[I, ZERO], [ZERO, -I]]
    assert rep.generators["b"] == [[ZERO, I], [I, ZERO]]
    assert check_unitary(rep).passed
    assert check_relations(rep, QUATERNION).passed
    assert rep.evaluate("abAB") == [[-ONE, ZERO], [ZERO, -ONE]]
    assert all(determinant(m) == 1 for m in rep.generators.values())
    dim, basis = commutant(rep)
    assert dim == 1 and basis[0][0][0] == basis[0][1][1]


def test_wrong_relator_reported_with_residual():
    report = check_relations(clock_shift(2), GroupPresentation(("a", "b"), ("aa",)))
    assert not report.passed
    assert report.to_json()["residuals"]["aa"] == "4"


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_clock_shift_float(n):
    rep = clock_shift(n)
    assert rep.mode == FLOAT
    assert check_unitary(rep).passed
    for m in rep.generators.values():
        assert abs(determinant(m) - 1) < 1e-10
    comm = rep.evaluate("abAB")
    scalar = comm[0, 0]
    assert np.allclose(comm, scalar * np.eye(n))
    # a primitive n-th root of unity
    assert abs(scalar**n - 1) < 1e-9
    assert all(abs(scalar**k - 1) > 1e-6 for k in range(1, n))
    assert commutant(rep)[0] == 1


def test_clock_shift_four_exact_is_unitary_but_not_special():
    rep = clock_shift(4, EXACT)
    assert check_unitary(rep).passed
    assert determinant(rep.generators["a"]) == -1
    assert rep.evaluate("abAB")[0][0] == I
    assert commutant(rep)[0] == 1


@pytest.mark.parametrize("n", [0, 1, -3])
def test_clock_shift_rank_checked(n):
    with pytest.raises(InvalidRank):
        clock_shift(n)


def test_clock_shift_exact_unavailable_for_three():
    with pytest.raises(InvalidRank):
        clock_shift(3, EXACT)


def test_free_group_and_commuting_diagonals():
    pres = GroupPresentation.free(["a", "b"])
    assert pres.is_free and not pres.relators
    rep = UnitaryRep(2, {"a": [[I, ZERO], [ZERO, ONE]], "b": [[-ONE, ZERO], [ZERO, ONE]]})
    assert check_relations(rep, pres).passed
    assert check_unitary(rep).passed
    assert commutant(rep)[0] == 2
    assert stability_report(FlatBundle(rep, F), OMEGA)["verdict"] == INAPPLICABLE


def test_presentation_validation():
    with pytest.raises(StromverError):
        GroupPresentation(("a",), ())
    with pytest.raises(StromverError):
        GroupPresentation(("ab",), ("ab",))
    with pytest.raises(StromverError):
        GroupPresentation(("a",), ("ac",))
    with pytest.raises(StromverError):
        GroupPresentation(("a",), ("aa",), is_free=True)


def test_non_unitary_detected():
    rep = UnitaryRep(1, {"a": [[gr(2)]]})
    report = check_unitary(rep)
    assert not report.passed and report.residuals["a"] == 9


def test_indeterminate_rank_raises():
    rep = UnitaryRep(2, {"a": np.diag([1.0, cmath.exp(1e-7j)])}, FLOAT, 1e-10)
    with pytest.raises(IndeterminateRank):
        commutant(rep)
    assert commutant(UnitaryRep(2, rep.generators, FLOAT, 1e-4))[0] == 4
    assert commutant(UnitaryRep(2, rep.generators, FLOAT, 1e-16))[0] == 2


def test_float_matches_exact():
    rep = clock_shift(2)
    f = rep.as_float()
    assert f.mode == FLOAT
    assert commutant(f)[0] == commutant(rep)[0]
    assert np.allclose(f.evaluate("abAB"), -np.eye(2))


def test_flat_bundle_is_stable_with_degree_zero():
    b = FlatBundle(clock_shift(2), F)
    assert b.curvature().is_zero()
    report = stability_report(b, OMEGA)
    assert report["verdict"] == STABLE
    assert report["degree"] == "0"
    assert report["commutant_dim"] == 1


def test_degree_values():
    alpha = wedge(F.sigma(1), F.sigma_bar(1)) * I
    assert degree(alpha, OMEGA) == 4
    assert degree(OMEGA, OMEGA) == 6
    with pytest.raises(DimensionMismatch):
        degree(F.sigma(0), OMEGA)


@given(gauss, gauss, gauss)
def test_degree_ignores_exact_forms(x, y, z):
    beta = F.sigma(0) * x + F.sigma(1) * y + F.sigma_bar(2) * z
    alpha = wedge(F.sigma(1), F.sigma_bar(1)) * I
    assert degree(alpha + ce_differential(beta), OMEGA) == degree(alpha, OMEGA)


def test_load_rep_roundtrip():
    data = rep_to_json(clock_shift(2))
    data["relators"] = list(QUATERNION.relators)
    rep, pres = load_rep(json.dumps(data))
    assert rep.generators == clock_shift(2).generators
    assert pres.relators == QUATERNION.relators
    rep2, pres2 = load_rep({"n": 1, "generators": {"a": [["i"]]}})
    assert pres2.is_free and rep2.generators["a"] == [[I]]


def test_load_rep_float_and_errors():
    rep, _ = load_rep({"n": 1, "mode": "float", "generators": {"a": [[[0.6, 0.8]]]}})
    assert check_unitary(rep).passed
    with pytest.raises(StromverError):
        load_rep({"generators": {}})
    with pytest.raises(StromverError):
        load_rep({"n": 1, "generators": {"a": [[[0.5, 0.5]]]}})
    with pytest.raises(DimensionMismatch):
        load_rep({"n": 2, "generators": {"a": [["1"]]}})
