import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from schubcode.gf import (
    GF,
    Field,
    FieldElement,
    FieldError,
    add,
    det,
    enumerate_elements,
    field_json,
    field_make,
    inv,
    is_irreducible,
    matmul,
    mul,
    neg,
    nullspace,
    parse_q,
    power,
    prime_power,
    rank,
    rref,
)

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64]


def test_prime_field_has_no_modulus_use():
    F = field_make(2, 1)
    assert (F.p, F.e, F.q) == (2, 1, 2)


def test_f4_modulus():
    assert field_make(2, 2).modulus == (1, 1, 1)  # x^2 + x + 1


def test_f9_modulus_is_smallest_irreducible():
    # oracle: monic quadratics over F_3 in lexicographic order (low degree first),
    # irreducible iff no root
    cands = []
    for c0, c1 in itertools.product(range(3), repeat=2):
        if all((x * x + c1 * x + c0) % 3 for x in range(3)):
            cands.append((c0, c1, 1))
    assert field_make(3, 2).modulus == min(cands)


def test_field_make_is_interned():
    assert field_make(3, 2) is field_make(3, 2)
    assert GF(9) is field_make(3, 2)


@pytest.mark.parametrize("p,e", [(4, 1), (1, 1), (6, 2)])
def test_field_make_rejects_non_prime(p, e):
    with pytest.raises(FieldError):
        field_make(p, e)


def test_field_cap(monkeypatch):
    with pytest.raises(FieldError):
        field_make(2, 13)
    monkeypatch.setenv("SCHUBCODE_FIELD_CAP", "8")
    with pytest.raises(FieldError):
        field_make(2, 4)
    assert field_make(2, 3, cap=8).q == 8


def test_spec_examples():
    F2, F5, F4 = GF(2), GF(5), GF(4)
    assert F2.add(1, 1) == 0
    assert F5.inv(3) == 2
    assert F4.mul(2, 3) == 1


def test_enumerate_elements():
    for q in (2, 3, 4):
        els = enumerate_elements(GF(q))
        assert [int(x) for x in els] == list(range(q))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
def test_axioms_on_all_triples(q):
    F = GF(q)
    A, M = F.add_table.astype(int), F.mul_table.astype(int)
    r = np.arange(q)
    assert (A == A.T).all() and (M == M.T).all()
    assert (A[A[:, :, None], r[None, None, :]] == A[r[:, None, None], A[None, :, :]]).all()
    assert (M[M[:, :, None], r[None, None, :]] == M[r[:, None, None], M[None, :, :]]).all()
    # a(b + c) = ab + ac
    lhs = M[r[:, None, None], A[None, :, :]]
    rhs = A[M[:, :, None], M[:, None, :]]
    assert (lhs == rhs).all()
    assert (A[0] == r).all() and (M[1] == r).all()


@pytest.mark.parametrize("q", SMALL_Q)
def test_frobenius_and_inverses(q):
    F = GF(q)
    for a in range(q):
        assert F.pow(a, q) == a
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0


@pytest.mark.parametrize("q", [4, 9, 27, 512, 729])
def test_table_and_polynomial_paths_agree(q):
    F = GF(q)
    rng = np.random.default_rng(q)
    for a, b in rng.integers(0, q, size=(200, 2)):
        assert F.mul(int(a), int(b)) == F._poly_mul(int(a), int(b))


def test_large_field_without_log_tables():
    F = GF(512)
    assert F._exp is None
    for a in (1, 2, 77, 511):
        assert F.mul(a, F.inv(a)) == 1


@given(st.sampled_from(SMALL_Q), st.data())
def test_inverse_of_product(q, data):
    F = GF(q)
    a = data.draw(st.integers(1, q - 1))
    b = data.draw(st.integers(1, q - 1))
    assert F.inv(F.mul(a, b)) == F.mul(F.inv(b), F.inv(a))


def test_field_element_wrappers():
    F = GF(4)
    a, b = F.element(2), F.element(3)
    assert int(a * b) == 1
    assert int(add(a, b)) == 1
    assert int(mul(a, b)) == 1
    assert int(neg(a)) == 2
    assert int(inv(a)) == 3
    assert int(power(a, 3)) == 1
    with pytest.raises(ZeroDivisionError):
        inv(F.element(0))
    with pytest.raises(ValueError):
        a + GF(2).element(1)
    with pytest.raises(FieldError):
        F.element(4)


def test_parse_q_and_json():
    assert parse_q("q=4").q == 4
    assert parse_q("9").q == 9
    with pytest.raises(FieldError):
        parse_q("q=6")
    assert field_json(GF(9)) == {"p": 3, "e": 2, "q": 9, "modulus": [1, 0, 1]}


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(49) == (7, 2)
    with pytest.raises(FieldError):
        prime_power(12)


def test_is_irreducible():
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((1, 0, 1), 2)  # (x+1)^2


@st.composite
def matrices(draw, max_rows=4, max_cols=5):
    q = draw(st.sampled_from([2, 3, 4, 5, 9]))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return GF(q), rows


def _apply(F, rows, x):
    out = []
    for r in rows:
        s = 0
        for a, b in zip(r, x):
            s = F.add(s, F.mul(a, b))
        out.append(s)
    return out


@given(matrices())
def test_nullspace_is_kernel_of_right_size(fm):
    F, rows = fm
    ns = nullspace(F, rows)
    assert len(ns) + rank(F, rows) == len(rows[0])
    for v in ns:
        assert not any(_apply(F, rows, v))


@given(matrices(), st.booleans())
def test_rref_pivots(fm, reverse):
    F, rows = fm
    R, piv = rref(F, rows, reverse=reverse)
    assert len(R) == len(piv) == rank(F, rows)
    for r, c in zip(R, piv):
        assert r[c] == 1
        if reverse:
            assert not any(r[c + 1:])
        else:
            assert not any(r[:c])


@given(matrices(max_rows=4, max_cols=4))
def test_det_zero_iff_singular(fm):
    F, rows = fm
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    assert (det(F, sq) == 0) == (rank(F, sq) < n)


@given(matrices(), st.data())
def test_matmul_matches_scalar(fm, data):
    F, rows = fm
    c = data.draw(st.integers(1, 3))
    B = data.draw(st.lists(st.lists(st.integers(0, F.q - 1), min_size=c, max_size=c),
                           min_size=len(rows[0]), max_size=len(rows[0])))
    got = matmul(F, np.array(rows), np.array(B))
    cols = list(zip(*B))
    ref = [[_apply(F, [r], col)[0] for col in cols] for r in rows]
    assert got.tolist() == ref
