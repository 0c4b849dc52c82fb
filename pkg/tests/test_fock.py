import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualpairs.fock import (
    FockConfig,
    FockVector,
    WindowError,
    annihilate,
    apply_mode,
    basis,
    charge_sectors,
    charges,
    create,
    energy2,
    format_monomial,
    graded_dim,
    monomial_vector,
    parity,
    phi,
    psi,
    tau,
    vacuum,
    vacuum_monomial,
)
from dualpairs.qseries import partition_count

L1 = FockConfig(1, False, 12)


# -- word oracle: a monomial is an ordered list of (species, level) factors ------

def canon(word):
    """Bubble-sort into canonical order; returns (sign, tuple) or (0, None) on repeats."""
    w = list(word)
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                w[j], w[j + 1] = w[j + 1], w[j]
                sign = -sign
    if len(set(w)) != len(w):
        return 0, None
    return sign, tuple(w)


def to_masks(word, nspecies):
    masks = [0] * nspecies
    for s, k in word:
        masks[s] |= 1 << k
    return tuple(masks)


factor = st.tuples(st.integers(0, 2), st.integers(0, 4))


@settings(max_examples=300, deadline=None)
@given(st.lists(factor, max_size=6, unique=True), factor)
def test_create_matches_word_oracle(word, f):
    sign0, w = canon(word)
    masks = to_masks(w, 3)
    got = create(masks, *f)
    s, w2 = canon([f] + list(w))
    if s == 0:
        assert got is None
    else:
        assert got == (s, to_masks(w2, 3))


@settings(max_examples=300, deadline=None)
@given(st.lists(factor, max_size=6, unique=True), factor)
def test_annihilate_matches_word_oracle(word, f):
    _, w = canon(word)
    masks = to_masks(w, 3)
    got = annihilate(masks, *f)
    if f not in w:
        assert got is None
    else:
        i = w.index(f)
        rest = w[:i] + w[i + 1:]
        assert got == ((-1) ** i, to_masks(rest, 3))


def test_mode_examples():
    v = monomial_vector([(psi("-"), -1)], L1)
    w, over = apply_mode(psi("+"), 1, v, L1)
    assert w == vacuum(L1) and not over
    u = monomial_vector([(psi("+"), -1)], L1)
    assert not apply_mode(psi("+"), 1, u, L1)[0]
    w, _ = apply_mode(psi("-"), -3, v, L1)
    canonical = monomial_vector([(psi("-"), -1), (psi("-"), -3)], L1)
    assert w == -1 * canonical
    (m,) = canonical.terms
    assert format_monomial(m, L1) == "psi(-,1,-1/2) psi(-,1,-3/2)"
    with pytest.raises(ValueError):
        apply_mode(psi("-"), 2, v, L1)


def test_overflow_flag():
    small = FockConfig(1, False, 2)
    v = monomial_vector([(psi("-"), -1)], small)
    _, over = apply_mode(psi("+"), -3, v, small)
    assert over


def test_canonical_anticommutators_on_states():
    # {psi^-_m, psi^+_n} = delta_{m+n,0} checked by composing modes on every basis state
    cfg = FockConfig(1, False, 6)
    for e2 in range(7):
        for m in basis(cfg, None, e2):
            v = FockVector({m: 1})
            for a in (-3, -1, 1, 3):
                for b in (-3, -1, 1, 3):
                    x = apply_mode(psi("-"), a, apply_mode(psi("+"), b, v, cfg)[0], cfg)[0]
                    y = apply_mode(psi("+"), b, apply_mode(psi("-"), a, v, cfg)[0], cfg)[0]
                    assert x + y == (v if a + b == 0 else FockVector())
                    x = apply_mode(psi("-"), a, apply_mode(psi("-"), b, v, cfg)[0], cfg)[0]
                    y = apply_mode(psi("-"), b, apply_mode(psi("-"), a, v, cfg)[0], cfg)[0]
                    assert not (x + y)


def test_graded_dims_l1():
    assert graded_dim(L1, (0,), 6) == 3
    assert graded_dim(L1, (0,), 8) == partition_count(4) == 5
    assert basis(L1, (0,), 0) == (vacuum_monomial(L1),)
    for n in range(7):
        assert graded_dim(L1, (0,), 2 * n) == partition_count(n)
    cfg = FockConfig(1, False, 16)
    assert graded_dim(cfg, (0,), 16) == partition_count(8)
    for m in range(-3, 4):
        if m * m <= 12:
            assert graded_dim(L1, (m,), m * m) == 1
            assert graded_dim(L1, (m,), m * m - 1 if m else 0) == (1 if m == 0 else 0)
    assert graded_dim(L1, (4,), 12) == 0


def test_total_dim_is_product_of_fermion_factors():
    # dim F_e for one charged pair is the q^(e/2) coefficient of prod (1 + q^r)^2
    cfg = FockConfig(1, False, 12)
    coeff = [1] + [0] * 12
    for r2 in range(1, 13, 2):
        for _ in range(2):
            coeff = [coeff[k] + (coeff[k - r2] if k >= r2 else 0) for k in range(13)]
    assert [graded_dim(cfg, None, e) for e in range(13)] == coeff


def test_neutral_dims():
    cfg = FockConfig(0, True, 12)
    assert [graded_dim(cfg, None, e) for e in range(13)] == [1, 1, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 3]
    assert graded_dim(cfg, None, 3, 0) == 0
    assert graded_dim(cfg, None, 8, 0) == 2


def test_l2_total():
    cfg = FockConfig(2, False, 12)
    assert sum(graded_dim(cfg, None, e) for e in range(13)) == 1095


def test_window():
    with pytest.raises(WindowError):
        basis(FockConfig(1, False, 4), None, 6)
    with pytest.raises(ValueError):
        FockConfig(0, False, 4)


def test_charge_energy_parity():
    v = monomial_vector([(psi("-"), -1), (psi("-"), -3), (psi("+"), -1)], L1)
    (m,) = v.terms
    assert charges(m, 1) == (1,)
    assert energy2(m) == 5
    assert parity(m) == 1
    assert charge_sectors(L1, 1) == [(-1,), (1,)]


def test_tau():
    v = monomial_vector([(psi("-"), -1), (psi("+"), -1)], L1)
    assert tau(v, 1, L1) == -1 * v
    w = monomial_vector([(psi("-"), -1), (psi("+"), -3)], L1)
    assert tau(tau(w, 1, L1), 1, L1) == w
    assert tau(vacuum(L1), 1, L1) == vacuum(L1)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 8), st.integers(-2, 2), st.sampled_from([-5, -3, -1, 1, 3, 5]))
def test_tau_intertwines_modes(e2, c, n2):
    # tau psi^- tau = psi^+ on one pair
    cfg = FockConfig(1, False, 14)
    for m in basis(cfg, (c,), e2):
        v = FockVector({m: 1})
        lhs = tau(apply_mode(psi("-"), n2, v, cfg)[0], 1, cfg)
        rhs = apply_mode(psi("+"), n2, tau(v, 1, cfg), cfg)[0]
        assert lhs == rhs


def test_dump_format():
    cfg = FockConfig(1, True, 6)
    v = monomial_vector([(psi("-"), -3), (psi("+"), -1)], cfg) + monomial_vector([(phi(), -1)], cfg)
    assert v.dump(cfg).splitlines() == ["phi(-1/2) : 1", "psi(-,1,-3/2) psi(+,1,-1/2) : 1"]
