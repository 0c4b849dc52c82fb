from fractions import Fraction

import pytest

from dualpairs.symalg import poly as P
from dualpairs.symalg.diffop import DiffOp, J, Wop, diffop_bracket, psi_cocycle
from dualpairs.symalg.glinf import (
    E,
    GlInfElement,
    WindowError,
    chi,
    cocycle_C,
    cocycle_compat,
    cocycle_window,
    glinf_bracket,
    in_dinf,
    phi,
)


def oracle_C(i, j, k, l):
    # C(E_ij, E_kl) = delta_il delta_jk (1 if i <= 0 < j, -1 if j <= 0 < i)
    if (i, j) != (l, k):
        return 0
    if i <= 0 < j:
        return 1
    if j <= 0 < i:
        return -1
    return 0


def test_unit_brackets():
    idx = range(-2, 4)
    w = (-2, 3)
    for i in idx:
        for j in idx:
            for k in idx:
                for l in idx:
                    got = glinf_bracket(E(i, j, w), E(k, l, w))
                    want = GlInfElement(w, {}, oracle_C(i, j, k, l))
                    if j == k:
                        want = want + E(i, l, w)
                    if l == i:
                        want = want - E(k, j, w)
                    assert got == want


def test_chi_and_cocycle_sign():
    assert chi(0) == 1 and chi(1) == 0
    assert cocycle_C(E(0, 1), E(1, 0)) == 1
    assert cocycle_C(E(1, 0), E(0, 1)) == -1
    assert cocycle_C(E(2, 3), E(3, 2)) == 0


def test_phi_is_a_homomorphism_inside_the_window():
    w = (-8, 9)
    for a in (J(1, 2), J(2, -1), Wop(1, 1), DiffOp({0: P.W})):
        for b in (J(0, -2), J(2, 1), Wop(3, -1)):
            lhs = phi(diffop_bracket(a, b).without_center(), w)
            rhs = glinf_bracket(phi(a, w), phi(b, w))
            inner = rhs.window
            assert lhs.agrees_on(GlInfElement(inner, rhs.entries), inner)
            assert rhs.central == psi_cocycle(a, b)


def test_cocycle_compat_examples():
    assert cocycle_compat(J(0, 1), J(0, -1), (-2, 2)) == (1, 1)
    t2, tm2 = DiffOp({2: P.ONE}), DiffOp({-2: P.ONE})
    assert cocycle_compat(t2, tm2, (-2, 3)) == (2, 2)
    assert cocycle_compat(t2, DiffOp({1: P.ONE}), (-2, 3)) == (0, 0)
    assert cocycle_window(t2, tm2) == (-1, 2)
    with pytest.raises(WindowError):
        cocycle_compat(t2, tm2, (0, 1))


def test_truncated_bracket_needs_room():
    with pytest.raises(WindowError):
        glinf_bracket(phi(J(0, 3), (0, 5)), phi(J(0, -3), (0, 5)))


def test_in_dinf():
    w = (-3, 4)
    d = E(1, 2, w) - E(-1, 0, w)
    assert in_dinf(d)
    assert not in_dinf(E(1, 2, w))
    assert in_dinf(phi(Wop(3, 2), w))
    assert not in_dinf(phi(J(2, 2), w))
