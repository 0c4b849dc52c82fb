from fractions import Fraction

import pytest

from dualpairs.fock import FockConfig, FockVector, WindowError, apply_mode, basis, phi, psi, vacuum
from dualpairs.repops import (
    RelationReport,
    _check_bracket,
    anticommutator_suite,
    commutator,
    compare_on_basis,
    cocycle_compat_suite,
    dinf_suite,
    heisenberg_suite,
    identity,
    j1_from_j0_check,
    locality_check,
    mode_operator,
    op_dinf,
    op_E,
    op_from_diffop,
    op_from_glinf,
    op_horizontal,
    op_J,
    op_W,
    relation_tasks,
    safe_commutator_energy2,
    virasoro_J_suite,
    virasoro_W_suite,
    zero_operator,
)
from dualpairs.symalg.diffop import J as J_sym, Wop as W_sym
from dualpairs.symalg.glinf import E as E_sym, GlInfElement

L1 = FockConfig(1, False, 12)
L2 = FockConfig(2, False, 8)
NEU = FockConfig(0, True, 12)


# -- oracle: normally ordered bilinears from raw mode products --------------------

def mode(label, n2, v, cfg):
    return apply_mode(label, n2, v, cfg)[0]


def normal_product(x, a2, y, b2, v, cfg):
    """:X_a Y_b: v with X_a annihilating (a > 0) and Y_b creating (b < 0) swapped."""
    if a2 > 0 and b2 < 0:
        return -1 * mode(y, b2, mode(x, a2, v, cfg), cfg)
    return mode(x, a2, mode(y, b2, v, cfg), cfg)


def falling(x, n):
    out = Fraction(1)
    for i in range(n):
        out *= x - i
    return out


def oracle_J(n, k, v, cfg):
    e = v.max_energy2() // 2 + abs(k) + 2
    out = FockVector()
    for p in range(1, cfg.l + 1):
        for a2 in range(-2 * e - 1, 2 * e + 2, 2):
            b2 = 2 * k - a2
            c = falling(Fraction(-a2 - 1, 2), n)
            out = out + c * normal_product(psi("-", p), a2, psi("+", p), b2, v, cfg)
    return out


def oracle_W_neutral(n, k, v, cfg):
    e = v.max_energy2() // 2 + abs(k) + 2
    out = FockVector()
    for a2 in range(-2 * e - 1, 2 * e + 2, 2):
        b2 = 2 * k - a2
        c = falling(Fraction(-a2 - 1, 2), n) / 2
        out = out + c * normal_product(phi(), a2, phi(), b2, v, cfg)
    return out


def oracle_E(i, j, v, cfg):
    out = FockVector()
    for p in range(1, cfg.l + 1):
        out = out + normal_product(psi("+", p), 1 - 2 * i, psi("-", p), 2 * j - 1, v, cfg)
    return out


def states(cfg, top):
    for e2 in range(top + 1):
        for m in basis(cfg, None, e2):
            yield FockVector({m: 1})


@pytest.mark.parametrize("cfg", [L1, L2])
def test_J_matches_mode_oracle(cfg):
    for n in range(3):
        for k in range(-2, 3):
            op = op_J(n, k, cfg)
            for v in states(cfg, 6):
                assert op.apply(v) == oracle_J(n, k, v, cfg), (n, k)


def test_E_matches_mode_oracle():
    for i in range(-2, 3):
        for j in range(-2, 3):
            op = op_E(i, j, L2)
            for v in states(L2, 6):
                assert op.apply(v) == oracle_E(i, j, v, L2)


def test_neutral_W_matches_mode_oracle():
    for n in (1, 3):
        for k in range(-2, 3):
            op = op_W(n, k, NEU)
            for v in states(NEU, 10):
                assert op.apply(v) == oracle_W_neutral(n, k, v, NEU)


def test_vacuum_annihilation():
    for i in range(-3, 4):
        assert not op_E(i, i, L1).apply(vacuum(L1))
    for p in (1, 2):
        assert not op_horizontal("e_star", p, p, L2).apply(vacuum(L2))
    for k in range(0, 4):
        assert not op_J(1, k, L1).apply(vacuum(L1))
        assert not op_W(1, k, NEU).apply(vacuum(NEU))


def test_phi_images_agree_with_direct_operators():
    for k in range(-2, 3):
        for n in range(3):
            a = op_from_diffop(J_sym(n, k), L1)
            compare_on_basis(a, op_J(n, k, L1), 8, rep := RelationReport("x"), "J")
            assert rep.passed
        b = op_from_diffop(W_sym(3, k), NEU)
        compare_on_basis(b, op_W(3, k, NEU), 8, rep := RelationReport("x"), "W")
        assert rep.passed
    g = op_from_glinf(E_sym(1, 2, (0, 3)), L1)
    compare_on_basis(g, op_E(1, 2, L1), 8, rep := RelationReport("x"), "E")
    assert rep.passed
    with pytest.raises(ValueError):
        op_from_glinf(E_sym(1, 2, (-2, 3)), NEU)


def test_operator_algebra():
    a = op_J(0, 1, L1)
    with pytest.raises(ValueError):
        a + op_J(0, 2, L1)
    twice = a + a
    v = op_J(0, -2, L1).apply(vacuum(L1))
    assert twice.apply(v) == 2 * a.apply(v)
    assert (a - a).apply(v) == FockVector()
    assert identity(L1, 3).apply(v) == 3 * v
    mat, dom, cod = op_J(0, -1, L1).block(4, (0,))
    assert mat.ncols == len(dom) == 2
    with pytest.raises(WindowError):
        op_J(0, -1, L1).block(12, (0,))


def test_commutator_window_policy():
    a, b = op_J(0, -3, L1), op_J(0, 3, L1)
    safe = safe_commutator_energy2(a, b, L1.emax2)
    assert safe == 6
    with pytest.raises(WindowError):
        commutator(a, b, safe + 1)
    c = commutator(a, b, safe)
    big = next(iter(basis(L1, None, safe + 2)))
    with pytest.raises(WindowError):
        c.act_monomial(big)


def test_mode_operator_degree():
    op = mode_operator(psi("-"), -3, L1)
    assert op.apply(vacuum(L1)) == mode(psi("-"), -3, vacuum(L1), L1)


# -- the suites are able to fail ------------------------------------------------------

def test_wrong_central_term_is_detected():
    rep = RelationReport("mutant")
    expected = identity(L1, 2)  # true value m * l = 1 for m = 1
    _check_bracket(op_J(0, 1, L1), op_J(0, -1, L1), expected, 8, rep, "m=1")
    assert not rep.passed
    f = rep.failures[0]
    assert f["instance"] == "m=1" and f["witness_monomial"] == "|0>"


def test_perturbed_operator_is_detected():
    rep = RelationReport("mutant")
    assert not compare_on_basis(op_J(1, 0, L1), op_J(1, 0, L1).scale(2), 6, rep, "J")
    assert rep.failures[0]["witness_monomial"] != ""


def test_zero_operator_passes_trivially():
    rep = RelationReport("zero")
    assert compare_on_basis(zero_operator(L1, 1), zero_operator(L1, 1), 6, rep, "0")


# -- suites -------------------------------------------------------------------------------

@pytest.mark.parametrize("cfg", [FockConfig(1, False, 8), FockConfig(2, False, 6),
                                 FockConfig(0, True, 8), FockConfig(1, True, 6)])
def test_all_suites_pass_on_small_windows(cfg):
    for name, fn, kw in relation_tasks(cfg):
        rep = fn(**kw)
        assert rep.passed, (name, rep.failures[:1])
        assert rep.instances > 0, name


def test_central_charges():
    for cfg, c in ((L1, 1), (FockConfig(2, False, 8), 2)):
        assert heisenberg_suite(cfg).passed
        assert virasoro_J_suite(cfg).passed
        assert virasoro_W_suite(cfg).passed
    assert NEU.central_charge == Fraction(1, 2)
    assert virasoro_W_suite(NEU).passed


def test_report_json_is_stable():
    a = anticommutator_suite(FockConfig(1, False, 6)).to_json()
    b = anticommutator_suite(FockConfig(1, False, 6)).to_json()
    assert a == b
    assert '"suite": "anticommutators"' in a


def test_dinf_and_cocycle_and_locality():
    assert dinf_suite(NEU).passed
    assert cocycle_compat_suite(2, 2).instances == 3 * 3 * 5
    rep = locality_check(1, 1, 1, 1, L1, "W")
    assert rep.passed and rep.instances == 9
    assert j1_from_j0_check(L1, 8).passed
    with pytest.raises(ValueError):
        j1_from_j0_check(L2, 4)
    with pytest.raises(ValueError):
        op_W(2, 0, L1)
