from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualpairs.qseries import (
    BigradedSeries,
    ConsistencyError,
    QSeries,
    SeriesError,
    ch_v1plus,
    ch_v1plus_product,
    ch_v1plus_theta,
    ch_virasoro_c1,
    charged_fermion_product,
    euler_inverse,
    gauss_rhs,
    jacobi_triple_form,
    partition_count,
    product_form,
    virasoro_sum,
)


def partitions(n, largest=None):
    # independent oracle: explicit enumeration
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def test_product_forms():
    assert product_form("one_minus_q_j", 10).to_list() == [1, -1, -1, 0, 0, 1]
    assert product_form("one_plus_q_j", 8).to_list() == [1, 1, 1, 2, 2]
    for kind in ("one_minus_q_j", "one_plus_q_j", "one_minus_q_2j", "one_plus_q_half_odd"):
        assert product_form(kind, 0).to_list() == [1]
    with pytest.raises(SeriesError):
        product_form("bogus", 4)


def test_distinct_parts_oracle():
    got = product_form("one_plus_q_j", 24).to_list()
    want = [sum(1 for p in partitions(n) if len(set(p)) == len(p)) for n in range(13)]
    assert got == want


def test_half_odd_product_counts_distinct_half_odd_parts():
    got = product_form("one_plus_q_half_odd", 12).to_list(step=1)
    odd = list(range(1, 13, 2))
    want = [0] * 13
    for r in range(len(odd) + 1):
        for c in combinations(odd, r):
            if sum(c) <= 12:
                want[sum(c)] += 1
    assert got == want


def test_gauss_rhs():
    assert gauss_rhs(8).to_list() == [1, -2, 0, 0, 2]
    assert gauss_rhs(0).to_list() == [1]


def test_gauss_identity_to_q20():
    lhs = product_form("one_minus_q_j", 40) / product_form("one_plus_q_j", 40)
    assert lhs == gauss_rhs(40)


def test_virasoro_c1_vacuum():
    assert ch_virasoro_c1(0, 12).to_list() == [1, 0, 1, 1, 2, 2, 4]
    assert ch_virasoro_c1(0, 0).to_list() == [1]
    p = [partition_count(n) for n in range(7)]
    assert ch_virasoro_c1(0, 12).to_list() == [p[0]] + [p[n] - p[n - 1] for n in range(1, 7)]


def test_v1plus():
    assert ch_v1plus(8).to_list() == [1, 0, 1, 1, 3]
    assert ch_v1plus_product(40) == ch_v1plus_theta(40)
    assert virasoro_sum(1, 16) == ch_v1plus(16)
    assert virasoro_sum(2, 40) == ch_v1plus(40)


def test_v1plus_inconsistency_raises(monkeypatch):
    import dualpairs.qseries as q

    monkeypatch.setattr(q, "ch_v1plus_theta", lambda n: QSeries.one(n))
    with pytest.raises(ConsistencyError):
        q.ch_v1plus(8)


def test_partition_count_oracle():
    for n in range(16):
        assert partition_count(n) == sum(1 for _ in partitions(n))
    assert euler_inverse(20).to_list() == [partition_count(n) for n in range(11)]


def test_boson_fermion():
    a = charged_fermion_product(16)
    b = jacobi_triple_form(16)
    assert a == b
    assert a.charge_slice(0).to_list() == [partition_count(k) for k in range(9)]
    assert a[(1, 1)] == 1 and a[(2, 4)] == 1 and a[(3, 8)] == 0


def test_csv_and_truncation():
    s = ch_v1plus(4)
    lines = s.to_csv().splitlines()
    assert lines[0] == "exponent_numerator,exponent_denominator,coefficient"
    assert lines[1:] == ["0,2,1", "1,2,0", "2,2,0", "3,2,0", "4,2,1"]
    with pytest.raises(SeriesError):
        s[5]
    with pytest.raises(SeriesError):
        s.truncate(6)
    with pytest.raises(SeriesError):
        QSeries({-1: 1}, 4)


series = st.lists(st.integers(-4, 4), min_size=1, max_size=8)


@settings(max_examples=80, deadline=None)
@given(series, series)
def test_ring_laws(a, b):
    n2 = 2 * (max(len(a), len(b)) - 1)
    x, y = QSeries.from_list(a, n2), QSeries.from_list(b, n2)
    assert x * y == y * x
    assert (x + y) - y == x
    if a[0] in (1, -1):
        assert (x * x.inverse()) == QSeries.one(n2)


def test_bigraded_truncation():
    s = BigradedSeries({(0, 0): 1, (1, 9): 2}, 8)
    assert s[(1, 9)] == 0 and s[(0, 0)] == 1
