import itertools
import math

import pytest
from hypothesis import given, strategies as st

from schubcode.combinat import (
    ConsecutiveError,
    IndexTuple,
    PRINTED_Q0_3,
    alpha_check,
    alpha_prime,
    block_structure,
    bruhat_leq,
    count_profile,
    delta,
    delta_set,
    enumerate_index_tuples,
    exceeds_q0,
    gaussian_binomial,
    inv_ln2,
    is_consecutive,
    k_alpha,
    kink_index,
    missing_cells,
    nabla,
    parse_alpha,
    phi_lift,
    point_count,
    profile_json,
    q0,
    reduce_alpha,
    smallest_prime_power_above_q0,
    truncate,
    upper_factor,
)


def all_tuples(max_ell=3, max_m=7):
    for ell in range(1, max_ell + 1):
        for m in range(ell, max_m + 1):
            yield from enumerate_index_tuples(ell, m)


def top_tuples(ells, max_m, consecutive=False):
    for ell in ells:
        for m in range(ell + 1, max_m + 1):
            for a in enumerate_index_tuples(ell, m):
                if a[-1] == m and (consecutive or not is_consecutive(a)):
                    yield a


@st.composite
def index_tuples(draw, min_ell=1, max_ell=4, max_m=8):
    ell = draw(st.integers(min_ell, max_ell))
    m = draw(st.integers(ell, max_m))
    entries = sorted(draw(st.sets(st.integers(1, m), min_size=ell, max_size=ell)))
    return IndexTuple(entries, m)


def test_index_tuple_validation():
    with pytest.raises(ValueError):
        IndexTuple((2, 2))
    with pytest.raises(ValueError):
        IndexTuple((0, 2))
    with pytest.raises(ValueError):
        IndexTuple((1, 5), 4)
    a = IndexTuple((2, 4), 6)
    assert a == (2, 4) and a.m == 6 and a.ell == 2


def test_enumerate_examples():
    assert enumerate_index_tuples(2, 3) == ((1, 2), (1, 3), (2, 3))
    assert enumerate_index_tuples(1, 3) == ((1,), (2,), (3,))
    t = enumerate_index_tuples(2, 4)
    assert len(t) == 6 and t[0] == (1, 2) and t[-1] == (3, 4)
    with pytest.raises(ValueError):
        enumerate_index_tuples(3, 2)


def test_bruhat_examples():
    assert bruhat_leq((1, 3), (2, 4))
    assert not bruhat_leq((3, 4), (2, 4))
    assert bruhat_leq((2, 4), (2, 4))
    with pytest.raises(ValueError):
        bruhat_leq((1,), (1, 2))


def test_nabla_examples():
    assert set(nabla(IndexTuple((2, 4)))) == {(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)}
    assert k_alpha((2, 4)) == 5
    assert len(nabla(IndexTuple((3, 4, 5), 5))) == math.comb(5, 3)
    assert nabla(IndexTuple((1, 2, 3), 6)) == ((1, 2, 3),)


@pytest.mark.parametrize("alpha", list(all_tuples()))
def test_nabla_delta_partition(alpha):
    n, d = set(nabla(alpha)), set(delta_set(alpha))
    assert not n & d
    assert len(n) + len(d) == math.comb(alpha.m, len(alpha))


def test_delta_examples():
    assert delta((1, 2, 3)) == 0
    assert delta((3, 4, 6, 7)) == 10
    assert delta((2, 4)) == 3


def _count_subspaces(m, ell, q):
    # independent oracle: distinct row spaces of all ell-tuples of vectors over F_p
    vecs = list(itertools.product(range(q), repeat=m))
    spaces = set()
    for combo in itertools.combinations(vecs, ell):
        span = set()
        for coeffs in itertools.product(range(q), repeat=ell):
            span.add(tuple(sum(c * v[i] for c, v in zip(coeffs, combo)) % q for i in range(m)))
        if len(span) == q**ell:
            spaces.add(frozenset(span))
    return len(spaces)


def test_gaussian_binomial_examples():
    assert gaussian_binomial(4, 2, 2) == 35 == _count_subspaces(4, 2, 2)
    assert gaussian_binomial(3, 1, 3) == 13 == _count_subspaces(3, 1, 3)
    for m in range(5):
        assert gaussian_binomial(m, 0, 3) == 1
        assert gaussian_binomial(m, m, 3) == 1


@given(st.integers(0, 9), st.integers(0, 9), st.sampled_from([2, 3, 4, 5]))
def test_gaussian_binomial_pascal(m, ell, q):
    # q-Pascal identity as an independent check
    if 1 <= ell <= m:
        assert gaussian_binomial(m + 1, ell, q) == (
            gaussian_binomial(m, ell - 1, q) + q**ell * gaussian_binomial(m, ell, q))


def test_block_structure_examples():
    assert (block_structure((3, 4, 6, 7)).u, block_structure((3, 4, 6, 7)).p) == (1, (0, 2, 4))
    assert block_structure((1, 2, 3)).p == (0, 3)
    assert block_structure((2, 4)).p == (0, 1, 2)


@given(index_tuples())
def test_block_structure_conditions(alpha):
    bs = block_structure(alpha)
    p = bs.p
    assert p[0] == 0 and p[-1] == len(alpha) and len(p) == bs.u + 2
    for i in range(1, bs.u + 1):
        assert alpha[p[i]] - alpha[p[i] - 1] >= 2
    for i in range(1, bs.u + 2):
        for j in range(1, p[i] - p[i - 1]):
            assert alpha[p[i] - 1 - j] == alpha[p[i] - 1] - j


def test_kink_and_derived_examples():
    assert kink_index((3, 4, 6, 7)) == 2
    assert kink_index((3, 4, 6, 8)) == 3
    assert kink_index((2, 4)) == 1
    assert alpha_prime(IndexTuple((3, 4, 6, 7))) == (3, 4, 5, 6)
    assert alpha_check(IndexTuple((3, 4, 6, 7))) == (3, 4, 6)
    assert alpha_prime(IndexTuple((3, 4, 6, 8))) == (3, 4, 6, 7)
    assert truncate((2, 4, 5), 2) == (2, 4)
    with pytest.raises(ConsecutiveError):
        kink_index((2, 3, 4))


def test_phi_examples():
    a = IndexTuple((2, 4))
    assert phi_lift((1, 2), a) == (1, 3)
    assert phi_lift((2, 3), a) == (2, 4)
    assert phi_lift((1, 2, 3, 4), IndexTuple((3, 4, 6, 7))) == (1, 2, 4, 5)
    with pytest.raises(ValueError):
        phi_lift((3, 4), a)


def test_missing_cells_examples():
    assert set(missing_cells(IndexTuple((2, 4)))) == {(1, 2), (2, 3)}
    assert (3, 4, 5, 7) in missing_cells(IndexTuple((3, 4, 6, 7)))


@pytest.mark.parametrize("alpha", list(top_tuples((1, 2, 3), 7)))
def test_lift_structure(alpha):
    k = kink_index(alpha)
    ell = len(alpha)
    ap = alpha_prime(alpha)
    image = [phi_lift(b, alpha) for b in nabla(ap)]
    miss = set(missing_cells(alpha))
    assert len(set(image)) == len(image)
    assert not miss & set(image)
    assert miss | set(image) == set(nabla(alpha))
    assert tuple(range(1, ell + 1)) in miss
    for b in nabla(ap):
        assert delta(phi_lift(b, alpha)) == delta(b) + ell - k
    for g in nabla(alpha):
        if g[k] - g[k - 1] == 1:
            assert g in miss


def test_point_count_examples():
    a = IndexTuple((2, 4))
    assert point_count(a, 2) == 19
    assert count_profile(a).a == (1, 1, 2, 1)
    assert point_count(IndexTuple((2, 3, 4)), 3) == gaussian_binomial(4, 3, 3)
    assert point_count(IndexTuple((1, 2, 3)), 5) == 1


@given(index_tuples(), st.sampled_from([2, 3, 4, 5, 7]))
def test_profile_consistency(alpha, q):
    prof = count_profile(alpha)
    assert prof.total(q) == point_count(alpha, q)
    assert prof.k_alpha == k_alpha(alpha)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_count_recursion_formula(q):
    for a in top_tuples((2, 3), 7):
        m, ell = a[-1], len(a)
        assert point_count(a, q) == point_count(alpha_prime(a), q) + q ** (m - ell) * point_count(alpha_check(a), q)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_lem_ineq_and_upp_grid(q):
    for ell in range(1, 5):
        for m in range(ell, 9):
            for a in enumerate_index_tuples(ell, m):
                s = sum(q ** sum(b) for b in nabla(a))
                assert (q - 1) ** ell * s < q**ell * q ** sum(a)
                assert point_count(a, q) < upper_factor(q, ell) * q ** delta(a)


def test_q0_values():
    assert q0(2) == 2.0
    assert abs(q0(3) - (2 + math.sqrt(2))) < 1e-12
    assert abs(q0(3) - PRINTED_Q0_3) > 0.2
    assert all(q0(ell + 1) > q0(ell) for ell in range(2, 50))
    assert abs(q0(50) / 50 - inv_ln2()) < 0.1
    with pytest.raises(ValueError):
        q0(1)


def test_exceeds_q0_exact():
    assert not exceeds_q0(2, 2)
    assert exceeds_q0(3, 2)
    assert not exceeds_q0(3, 3)
    assert exceeds_q0(4, 3)
    for ell in range(2, 30):
        for q in range(2, 100):
            assert exceeds_q0(q, ell) == (q > q0(ell))
    assert smallest_prime_power_above_q0(2) == 3
    assert smallest_prime_power_above_q0(3) == 4


def test_parse_reduce_profile():
    a = parse_alpha("(2, 4)")
    assert a == (2, 4)
    red, orig = reduce_alpha(parse_alpha("2,4"), 6)
    assert red.m == 4 and orig == 6
    assert profile_json(IndexTuple((2, 4)), 3) == {
        "alpha": [2, 4], "ell": 2, "m": 4, "q": 3, "k_alpha": 5, "delta": 3,
        "a": [1, 1, 2, 1], "n_alpha": 49}
