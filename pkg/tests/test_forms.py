from fractions import Fraction

import pytest
from hypothesis import given

import oracles
from conftest import forms_of_degree, gauss
from stromver.errors import AmbientMismatch, OutOfModel
from stromver.forms import (
    FLIPPED,
    Coframe,
    InvariantForm,
    TopFormSection,
    ce_differential,
    codifferential,
    conjugate,
    del_,
    delbar,
    evaluate,
    form_inner,
    form_to_vector,
    hodge_star,
    kaehler_form,
    omega_norm,
    power,
    proportionality,
    render,
    to_json,
    top_coefficient,
    vector_to_form,
    volume_coefficient,
    volume_form,
    wedge,
)
from stromver.lie import HermitianForm, abelian, sl2_standard
from stromver.scalars import I, ONE, ZERO, gr
from stromver import linalg

SL2 = sl2_standard()
F0 = Coframe(SL2[0])
H0 = SL2[1]
A, B, C = 0, 1, 2


def sig(k):
    return F0.sigma(k)


def sigb(k):
    return F0.sigma_bar(k)


def test_wedge_basics():
    assert wedge(sig(A), sig(A)).is_zero()
    assert wedge(sig(A), sig(B)) == -wedge(sig(B), sig(A))
    w = kaehler_form(F0, H0)
    w3 = power(w, 3)
    assert set(w3.terms) == {(0, 1, 2, 3, 4, 5)}
    assert top_coefficient(w3) != 0


@given(forms_of_degree(F0, 1), forms_of_degree(F0, 2), forms_of_degree(F0, 3))
def test_graded_commutative_and_associative(a, b, c):
    assert wedge(a, b) == wedge(b, a) * (-1) ** 2
    assert wedge(a, c) == wedge(c, a) * (-1) ** 3
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_mixed_frames_rejected():
    other = Coframe(abelian(3)[0])
    with pytest.raises(AmbientMismatch):
        wedge(sig(A), other.sigma(0))
    with pytest.raises(AmbientMismatch):
        sig(A) + F0.with_sign(FLIPPED).sigma(0)


def test_structure_equations(sign):
    F = Coframe(SL2[0], sign)
    # c^A_{BC} = 1
    assert ce_differential(F.sigma(A)) == F.monomial((B, C)) * sign
    assert delbar(F.sigma(A)).is_zero()
    for k in range(3):
        assert delbar(F.sigma(k)).is_zero()
        assert ce_differential(F.sigma(k)).bidegrees() <= {(2, 0)}
        assert ce_differential(F.sigma_bar(k)).bidegrees() <= {(0, 2)}


def test_d_squared_on_every_basis_form(sign):
    F = Coframe(SL2[0], sign)
    for deg in range(F.rank + 1):
        for key in F.basis(deg):
            assert ce_differential(ce_differential(F.monomial(key))).is_zero(), key


@pytest.mark.parametrize("p", range(4))
def test_leibniz(p):
    @given(forms_of_degree(F0, p), forms_of_degree(F0, 2))
    def check(a, b):
        lhs = ce_differential(wedge(a, b))
        rhs = wedge(ce_differential(a), b) + wedge(a, ce_differential(b)) * (-1) ** p
        assert lhs == rhs

    check()


def test_d_is_del_plus_delbar():
    w = kaehler_form(F0, H0)
    assert ce_differential(w) == del_(w) + delbar(w)
    assert del_(delbar(w)) == -delbar(del_(w))


def test_del_omega_expansion():
    w = kaehler_form(F0, H0)
    half_i = I * Fraction(1, 2)
    expected = (
        wedge(ce_differential(sig(A)), sigb(A)) * 2
        + wedge(ce_differential(sig(B)), sigb(B))
        + wedge(ce_differential(sig(C)), sigb(C))
    ) * half_i
    assert del_(w) == expected


def test_ddbar_constant_matches_symbolic_oracle(sign):
    F = Coframe(SL2[0], sign)
    w = kaehler_form(F, H0)
    kappa = proportionality(I * del_(delbar(w)), power(w, 2))
    expected = oracles.ddbar_constant(sign=sign)
    assert kappa is not None
    assert complex(kappa) == complex(expected)
    assert kappa == 2


@pytest.mark.parametrize("lam", [1, 2, Fraction(1, 3), Fraction(7, 5)])
def test_omega_squared_closed_omega_not(lam, sign):
    F = Coframe(SL2[0], sign)
    w = kaehler_form(F, H0.scaled(lam))
    assert ce_differential(power(w, 2)).is_zero()
    assert not ce_differential(w).is_zero()


def test_conjugation():
    w = kaehler_form(F0, H0)
    assert conjugate(sig(A)) == sigb(A)
    assert conjugate(w) == w
    x = wedge(sig(A), sigb(B)) * gr("1+2i") + sig(C) * I
    assert conjugate(conjugate(x)) == x
    assert conjugate(x).bidegrees() == {(0, 1), (1, 1)}


@given(forms_of_degree(F0, 2))
def test_conjugate_commutes_with_d(a):
    assert conjugate(ce_differential(a)) == ce_differential(conjugate(a))


def test_kaehler_form_identity_metric():
    g, h, _ = abelian(3)
    F = Coframe(g)
    half_i = I * Fraction(1, 2)
    expected = (wedge(F.sigma(0), F.sigma_bar(0)) + wedge(F.sigma(1), F.sigma_bar(1)) + wedge(F.sigma(2), F.sigma_bar(2))) * half_i
    assert kaehler_form(F, h) == expected


def test_evaluate_determinant_convention():
    two = wedge(sig(A), sigb(B))
    ea = [ONE, ZERO, ZERO, ZERO, ZERO, ZERO]
    eb_bar = [ZERO, ZERO, ZERO, ZERO, ONE, ZERO]
    assert evaluate(two, [ea, eb_bar]) == 1
    assert evaluate(two, [eb_bar, ea]) == -1


def test_hodge_star_values():
    w = kaehler_form(F0, H0)
    vol = volume_form(F0, H0)
    assert vol == power(w, 3) * Fraction(1, 6)
    assert volume_coefficient(F0, H0) == I * Fraction(1, 4)
    assert hodge_star(F0.scalar(1), H0) == vol
    assert hodge_star(vol, H0) == F0.scalar(1)
    assert hodge_star(w, H0) == power(w, 2) * Fraction(1, 2)


def test_star_defining_relation():
    keys = F0.basis(2)
    for ka in keys[:6]:
        for kb in keys:
            a, b = F0.monomial(ka), F0.monomial(kb)
            lhs = wedge(b, hodge_star(a, H0))
            assert lhs == volume_form(F0, H0) * form_inner(b, a, H0)


def test_star_star_sign(sign):
    F = Coframe(SL2[0], sign)
    for deg in range(7):
        for key in F.basis(deg):
            a = F.monomial(key)
            assert hodge_star(hodge_star(a, H0), H0) == a * (-1) ** deg


def test_codifferential_examples():
    w = kaehler_form(F0, H0)
    assert codifferential(w, H0).is_zero()
    assert codifferential(F0.scalar(3), H0).is_zero()
    assert codifferential(wedge(sig(B), sig(C)), H0) == sig(A) * 4
    # d of an invariant 1-form is pure (2,0)+(0,2), so this one vanishes
    assert codifferential(wedge(sig(B), sigb(B)), H0).is_zero()
    assert not codifferential(wedge(sig(A), sig(B)), H0).is_zero()


@given(forms_of_degree(F0, 2), forms_of_degree(F0, 1))
def test_codifferential_is_adjoint_up_to_exact_terms(a, b):
    # <d b, a> vol - <b, d* a> vol = d(b ^ *a), whose top coefficient vanishes (unimodular)
    lhs = form_inner(ce_differential(b), a, H0)
    rhs = form_inner(b, codifferential(a, H0), H0)
    assert lhs == rhs


def test_omega_norm():
    eye = HermitianForm(tuple(tuple(r) for r in linalg.identity(3)))
    theta = TopFormSection(1)
    assert omega_norm(theta, eye) == 1
    assert omega_norm(theta, H0) == Fraction(1, 2)
    for lam in (2, Fraction(1, 3)):
        assert omega_norm(theta, H0.scaled(lam)) == Fraction(1, 2) / lam**3


def test_top_form_section_rejects_non_constant():
    with pytest.raises(OutOfModel):
        TopFormSection(lambda p: 1)
    with pytest.raises(OutOfModel):
        TopFormSection(0)


def test_vector_roundtrip_and_rendering():
    w2 = power(kaehler_form(F0, H0), 2)
    v = form_to_vector(w2, 4)
    assert len(v) == 15
    assert vector_to_form(F0, v, 4) == w2
    assert "σ^{A0B0}σ̄^{A0B0}" in render(w2)
    assert to_json(w2)[0] == [[0, 1], [0, 1], "1"]


def test_proportionality():
    w = kaehler_form(F0, H0)
    assert proportionality(w * 3, w) == 3
    assert proportionality(sig(A), sig(B)) is None
    assert proportionality(F0.zero(), w) == 0


@given(gauss)
def test_scalar_multiplication_distributes(c):
    w = kaehler_form(F0, H0)
    assert (w + sig(A)) * c == w * c + sig(A) * c
    assert isinstance(w * c, InvariantForm)
