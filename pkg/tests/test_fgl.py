from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from bivcob.exactalg import QQ, ZZ, laurent_ring
from bivcob.fgl import (
    FormalGroupLaw,
    TwistData,
    additive_fgl,
    additive_specialization,
    lazard_ring,
    log_twist,
    multiplicative_fgl,
    multiplicative_specialization,
    tau_for_target,
    twist,
    universal_fgl,
)
from bivcob.series import SeriesRing, series_exp, substitute

X, Y = sympy.symbols("X Y")


def line_coeffs(s):
    return [Fraction(s.coeff((k,)).constant()) for k in range(s.cap + 1)]


def sympy_line(expr, cap):
    poly = sympy.series(expr, X, 0, cap + 1).removeO()
    return [Fraction(str(poly.coeff(X, k))) for k in range(cap + 1)]


def sympy_two(expr, cap):
    """Coefficients of a two-variable expression through total degree ``cap``."""
    t = sympy.symbols("t")
    scaled = sympy.series(expr.subs({X: t * X, Y: t * Y}), t, 0, cap + 1).removeO()
    poly = sympy.Poly(sympy.expand(scaled.subs(t, 1)), X, Y)
    return {m: Fraction(str(c)) for m, c in poly.terms()}


def two_coeffs(s):
    return {e: Fraction(c.constant()) for e, c in s.terms.items()}


def test_w1_universal_law():
    U = universal_fgl(1)
    assert str(U.F) == "x + y + a11*x*y"
    assert lazard_ring(1).relations == []


def test_universal_degree_three_contains_a11():
    U = universal_fgl(3)
    assert U.to_json()["F"]["text"].startswith("x + y + a11*x*y")
    assert set(U.to_json()) >= {"cap", "ring", "F", "inverse", "difference"}


@pytest.mark.parametrize("law", [universal_fgl(4), additive_fgl(5), multiplicative_fgl(5)])
def test_axioms_hold_exactly(law):
    assert law.axiom_failures() == []


def test_bad_law_rejected():
    S = SeriesRing(ZZ, ["x", "y"], 3)
    with pytest.raises(ValueError):
        FormalGroupLaw(S.parse("x + y + x^2*y"))


def test_specializations():
    U = universal_fgl(4)
    add = U.specialize(additive_specialization(U.ring))
    assert str(add.F) == "x + y"
    mult = U.specialize(multiplicative_specialization(U.ring))
    assert str(mult.F) == "x + y - beta*x*y"


def test_inverse_examples():
    assert str(additive_fgl(4).inverse) == "-x"
    U = universal_fgl(2)
    assert U.inverse.recap(2) == U.line.with_cap(2).parse("-x + a11*x^2")
    for beta in (1, 2, -3):
        law = multiplicative_fgl(6, beta)
        assert line_coeffs(law.inverse) == sympy_line(-X / (1 - beta * X), 6)
    M = multiplicative_fgl(4)
    assert M.inverse == M.line.parse("-x - beta*x^2 - beta^2*x^3 - beta^3*x^4")


@pytest.mark.parametrize("law", [universal_fgl(5), additive_fgl(6), multiplicative_fgl(6)])
def test_difference_identities(law):
    x, y = law.parent.gens()
    assert law.minus(law(x, y), y) == x
    assert law(law.minus(x, y), y) == x
    assert law.iota(law.iota(law.line.gen("x"))) == law.line.gen("x")


def test_difference_law_closed_forms():
    assert str(additive_fgl(3).difference) == "x - y"
    for beta in (1, 2):
        law = multiplicative_fgl(5, beta)
        # F_(x, y) = F(x, ι(y)) = (x - y) / (1 - β y)
        assert two_coeffs(law.difference) == sympy_two((X - Y) / (1 - beta * Y), 5)
    M = multiplicative_fgl(3)
    assert M.difference == M.parent.parse("x - y + beta*x*y - beta*y^2 + beta^2*x*y^2 - beta^2*y^3")


def test_n_series():
    M = multiplicative_fgl(4)
    x = M.line.gen("x")
    assert M.n_series(1) == x
    assert M.n_series(0) == M.line.zero
    assert M.n_series(2) == M.line.parse("2*x - beta*x^2")
    A = additive_fgl(4)
    assert A.n_series(7) == A.line.parse("7*x")
    assert M.n_series(-1) == M.inverse
    # β = 1: [d](x) = 1 - (1 - x)^d
    law = multiplicative_fgl(6, 1)
    for d in range(-4, 5):
        assert line_coeffs(law.n_series(d)) == sympy_line(1 - (1 - X) ** d, 6)


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_n_series_is_additive(m, n):
    U = universal_fgl(3)
    assert U.n_series(m + n) == U(U.n_series(m), U.n_series(n))


def test_log_examples():
    A = additive_fgl(5, QQ)
    assert A.log() == A.line.gen("x")
    assert A.pm_coefficients() == [1, 0, 0, 0, 0]
    M = multiplicative_fgl(5)
    b = M.ring.gen("beta")
    assert M.pm_coefficients() == [b ** m for m in range(5)]
    Uq = universal_fgl(3).tensor_q()
    ell = Uq.log()
    assert ell.coeff((2,)) == Uq.ring.parse("-1/2*a11")
    assert universal_fgl(3).pm_coefficients()[1] == universal_fgl(3).ring.parse("-a11")
    x, y = Uq.parent.gens()
    lx = substitute(ell, {"x": x})
    ly = substitute(ell, {"x": y})
    assert substitute(ell, {"x": Uq.F}) == lx + ly


def test_log_needs_rationals():
    with pytest.raises(ValueError):
        universal_fgl(2).log()


def test_log_is_natural():
    W = 4
    U = universal_fgl(W).tensor_q()
    hom = multiplicative_specialization(U.ring, beta=2)
    M = U.specialize(hom)
    ell = U.log().map_coefficients(hom, M.line.with_cap(U.log().cap))
    assert ell == M.log()
    assert line_coeffs(M.log()) == sympy_line(-sympy.log(1 - 2 * X) / 2, W + 1)
    # and into the Laurent ring over QQ
    hom = multiplicative_specialization(U.ring)
    M = U.specialize(hom)
    assert U.log().map_coefficients(hom, M.line.with_cap(W + 1)) == M.log()


def test_twist_examples():
    A = additive_fgl(5, QQ)
    assert twist(A, TwistData.identity(5)) == A
    P = SeriesRing(QQ, ["x"], 5)
    g = TwistData(P.one - series_exp(-P.gen("x")))
    assert str(twist(A, g).F) == "x + y - x*y"
    Uq = universal_fgl(4).tensor_q()
    assert str(twist(Uq, log_twist(Uq)).F) == "x + y"


def test_twist_round_trip():
    M = multiplicative_fgl(5, 1, QQ)
    t = TwistData.from_b([1, Fraction(1, 3), Fraction(-2, 5), 7, 1])
    assert twist(twist(M, t), t.inverse()) == M


def test_tau_for_target():
    A = additive_fgl(6, QQ)
    M = multiplicative_fgl(6, 1, QQ)
    assert tau_for_target(A, A) == TwistData.identity(6)
    t = tau_for_target(A, M)
    assert line_coeffs(t.g) == sympy_line(1 - sympy.exp(-X), 6)
    assert [Fraction(b.constant()) for b in t.b] == sympy_line(X / (1 - sympy.exp(-X)), 5)
    assert [str(b) for b in t.b] == ["1", "1/2", "1/12", "0", "-1/720", "0"]
    back = tau_for_target(M, A)
    assert line_coeffs(back.g) == sympy_line(-sympy.log(1 - X), 6)
    assert twist(A, t) == M


def test_twist_data_representations_agree():
    t = TwistData.from_b([1, Fraction(1, 2), Fraction(1, 12), 0, Fraction(-1, 720)])
    assert [str(b) for b in t.b] == ["1", "1/2", "1/12", "0", "-1/720"]
    with pytest.raises(ValueError):
        TwistData.from_b([2, 1])
    P = SeriesRing(QQ, ["x"], 3)
    with pytest.raises(ValueError):
        TwistData(P.parse("2*x"))


def test_laurent_law_over_beta():
    M = multiplicative_fgl(4, ring=laurent_ring("beta", 4))
    assert M.coefficient(1, 1) == -M.ring.gen("beta")
