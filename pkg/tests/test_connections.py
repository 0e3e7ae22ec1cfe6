from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gauss
from stromver import linalg
from stromver.connections import (
    InvariantConnection,
    bismut_connection,
    chern_connection,
    connection_to_json,
    curvature,
    curvature_skew_residual,
    gauduchon_family,
    holonomy_algebra,
    is_metric,
    is_totally_antisymmetric,
    su3_containment,
    torsion,
    torsion_skew_check,
    trace_r_wedge_r,
    zero_connection,
)
from stromver.errors import SingularMetric
from stromver.forms import Coframe, ce_differential, del_, delbar, kaehler_form, power, proportionality
from stromver.lie import HermitianForm, abelian, sl2_standard
from stromver.scalars import I, ZERO, gr

G, H, DAGGER = sl2_standard()


def frame(sign=1):
    return Coframe(G, sign)


def test_chern_connection_is_flat_metric_with_known_torsion(sign):
    F = frame(sign)
    c = chern_connection(F, H)
    assert is_metric(c, H)
    assert curvature(c).is_zero()
    T = torsion(c)
    # only the (2,0) part survives; T(e_A, e_B) = 2 s e_B
    assert T.t20[0][1][1] == 2 * sign
    assert T.t20[1][0][1] == -2 * sign
    assert all(not x for i in range(3) for j in range(3) for x in T.mixed[i][j])


def test_chern_torsion_skew_only_after_identification(sign):
    check = torsion_skew_check(torsion(chern_connection(frame(sign), H)), H, DAGGER)
    assert check.skew
    assert not check.raw_skew


def test_abelian_torsion_vanishes():
    g, h, d = abelian(3)
    T = torsion(chern_connection(Coframe(g), h))
    assert T.is_zero()
    assert torsion_skew_check(T, h, d).skew


def test_singular_metric_rejected():
    T = torsion(chern_connection(frame(), H))
    singular = HermitianForm(tuple(tuple(gr(x) for x in row) for row in [[1, 0, 0], [0, 0, 0], [0, 0, 1]]))
    with pytest.raises(SingularMetric):
        torsion_skew_check(T, singular, DAGGER)


def test_bismut_connection(sign):
    F = frame(sign)
    w = kaehler_form(F, H)
    b = bismut_connection(F, H)
    assert is_metric(b, H)
    T = torsion(b)
    low = T.lowered(H)
    assert is_totally_antisymmetric(low)
    assert T.as_three_form(H) == I * (del_(w) - delbar(w))
    # nabla J = 0: holomorphic fields stay holomorphic
    for a in range(6):
        for j in range(3):
            assert all(not x for x in b.covariant(a, j)[3:])


def test_bismut_curvature_properties(sign):
    F = frame(sign)
    w = kaehler_form(F, H)
    R = curvature(bismut_connection(F, H))
    assert R.part(2, 0).is_zero() and R.part(0, 2).is_zero()
    assert all(f.is_zero() for row in curvature_skew_residual(R, H) for f in row)
    trr = trace_r_wedge_r(R)
    assert ce_differential(trr).is_zero()
    assert proportionality(trr, power(w, 2)) == 32


def test_holonomy():
    F = frame()
    hol = holonomy_algebra(bismut_connection(F, H))
    assert len(hol) == 3
    assert su3_containment(hol, H)
    assert holonomy_algebra(chern_connection(F, H)) == []
    assert not su3_containment([linalg.identity(3)], H)
    assert not su3_containment([linalg.scale(I, linalg.identity(3))], H)


def test_gauduchon_family():
    F = frame()
    w = kaehler_form(F, H)
    c = chern_connection(F, H)
    g0 = gauduchon_family(F, H, 0)
    assert g0.gamma10 == c.gamma10 and g0.gamma01 == c.gamma01
    g1 = gauduchon_family(F, H, 1)
    b = bismut_connection(F, H)
    assert g1.gamma10 == b.gamma10
    assert proportionality(trace_r_wedge_r(gauduchon_family(F, H, Fraction(1, 2))), power(w, 2)) == 0
    with pytest.raises(ValueError):
        gauduchon_family(F, H, I)


@pytest.mark.parametrize("t", [0, Fraction(1, 3), 1, 2])
def test_gauduchon_metric_and_torsion_affine(t):
    F = frame()
    gt = gauduchon_family(F, H, t)
    assert is_metric(gt, H)
    T0 = torsion(gauduchon_family(F, H, 0)).full
    T1 = torsion(gauduchon_family(F, H, 1)).full
    Tt = torsion(gt).full
    for a in range(6):
        for b in range(6):
            for c in range(6):
                assert Tt[a][b][c] == (1 - gr(t)) * T0[a][b][c] + gr(t) * T1[a][b][c]


def _connection(g10, g01):
    freeze = lambda t: tuple(tuple(tuple(x) for x in row) for row in t)  # noqa: E731
    return InvariantConnection(frame(), freeze(g10), freeze(g01))


cubes = st.lists(st.lists(st.lists(gauss, min_size=3, max_size=3), min_size=3, max_size=3), min_size=3, max_size=3)


@settings(max_examples=15)
@given(cubes, cubes)
def test_invariant_curvature_formula(g10, g01):
    # for constant coefficients R(E_a, E_b) = [Gamma_a, Gamma_b] - Gamma_[E_a, E_b]
    conn = _connection(g10, g01)
    F = conn.frame
    R = curvature(conn)
    for a in range(6):
        for b in range(a + 1, 6):
            expected = linalg.commutator(conn.gamma_matrix(a), conn.gamma_matrix(b))
            for c, coef in enumerate(F.frame_bracket(a, b)):
                if coef:
                    expected = linalg.add(expected, linalg.scale(-coef, conn.gamma_matrix(c)))
            assert R.component((a, b)) == expected


def test_adjoint_connection_curvature():
    # nabla_{e_i} e_j = [e_i, e_j]_frame = -c^k_ij e_k: Jacobi makes the (2,0) curvature vanish
    g10 = [[[-G.c(i, j, k) for k in range(3)] for j in range(3)] for i in range(3)]
    zero = [[[ZERO] * 3 for _ in range(3)] for _ in range(3)]
    R = curvature(_connection(g10, zero))
    assert R.part(2, 0).is_zero()


def test_zero_connection_json():
    F = frame()
    data = connection_to_json(zero_connection(F, "chern"), H)
    assert data["kind"] == "chern"
    assert data["residuals"]["metric_compatible"]
    assert data["residuals"]["curvature_zero"]
    assert not data["residuals"]["torsion_zero"]
    assert data["residuals"]["trace_r_wedge_r"] == []
