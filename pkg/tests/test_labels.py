from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dualpairs.symalg.labels import (
    ExponentSet,
    LabelsA,
    MalformedExponentSet,
    labels_from_exponents,
)

x = sympy.Symbol("x")


def taylor(expr, N):
    s = sympy.series(expr, x, 0, N + 1).removeO()
    return [sympy.factorial(n) * s.coeff(x, n) for n in range(N + 1)]


def as_frac(v):
    v = sympy.Rational(v)
    return Fraction(int(v.p), int(v.q))


def test_examples():
    assert labels_from_exponents(ExponentSet(3, {}, "A"), 5).delta == (0,) * 6
    lab = labels_from_exponents(ExponentSet(1, {2: 1}, "A"), 5)
    assert lab == LabelsA(Fraction(1), (2, 1, 1, 1, 1, 1))
    assert all(v == 0 for v in labels_from_exponents(ExponentSet(2, {}, "Dplus"), 7).delta_plus)


exps = st.dictionaries(st.integers(-3, 3).filter(bool), st.integers(1, 3), max_size=3)


@settings(max_examples=12, deadline=None)
@given(exps, st.sampled_from([1, -1]))
def test_family_A_against_sympy(e, eps):
    c = sum(e.values()) + 1
    got = labels_from_exponents(ExponentSet(c, e, "A"), 5, eps).delta
    F = sum(n * (sympy.exp(eps * s * x) - 1) for s, n in e.items())
    want = taylor(F / (sympy.exp(x) - 1), 5) if e else [0] * 6
    assert list(got) == [as_frac(v) for v in want]


@settings(max_examples=8, deadline=None)
@given(exps)
def test_family_Dplus_against_sympy(e):
    es = ExponentSet(sum(e.values()), e, "Dplus")
    got = labels_from_exponents(es, 7)
    F = sum(n * (sympy.cosh(s * x) - 1) for s, n in es.nonzero().items())
    want = taylor(F / (2 * sympy.sinh(x / 2)), 7) if e else [0] * 8
    assert got.indices == (1, 3, 5, 7)
    assert list(got.delta_plus) == [as_frac(want[n]) for n in got.indices]
    # Delta+ is odd in x, so the even coefficients vanish
    assert all(want[n] == 0 for n in (0, 2, 4, 6))


def test_single_exponent_closed_form():
    # Delta+_n for {m: 1} equals the sum over half-odd j in (0, m) of 2 j^n
    m = 3
    lab = labels_from_exponents(ExponentSet(1, {m: 1}, "Dplus"), 7)
    for n in lab.indices:
        want = sum(Fraction(2 * k - 1, 2) ** n for k in range(1, m + 1))
        assert lab.get(n) == want


def test_malformed():
    with pytest.raises(MalformedExponentSet):
        ExponentSet(1, {2: Fraction(1, 2)}, "A")
    with pytest.raises(MalformedExponentSet):
        ExponentSet(1, {2: 1, 0: 1}, "A").check()
    with pytest.raises(MalformedExponentSet):
        labels_from_exponents(ExponentSet(1, {2: 1, 3: 1}, "A"), 3)
    with pytest.raises(ValueError):
        labels_from_exponents(ExponentSet(1, {}, "A"), 3, epsilon=2)


def test_implicit_zero_multiplicity():
    e = ExponentSet(3, {2: 2, 1: 1}, "A")
    assert e.zero_multiplicity() == 0
    assert ExponentSet(1, {1: 2}, "Dplus").zero_multiplicity() == -1
    assert ExponentSet(2, {-3: 1}, "Dplus").as_dict() == {3: 1}
