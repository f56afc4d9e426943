import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cboomerang.errors import EnumerationCapError, NotBijectiveError
from cboomerang.field import GF
from cboomerang.polynomial import make_monomial_spec
from cboomerang.space import FieldMap, VectorSpace, monomial_map
from cboomerang.uniformity import (
    ARGMAX_LIMIT,
    bct_entry_pairs,
    bct_entry_perm,
    bct_row,
    bct_table,
    boomerang_uniformity,
    ddt_entry,
    ddt_inverse_relation_check,
    ddt_row,
    ddt_table,
    differential_uniformity,
    linearized_entry_expected,
    special_case_expected,
    table_rows,
)


def naive_ddt(F, f, c):
    q = F.q
    t = np.zeros((q, q), dtype=int)
    for dx in range(q):
        for x in range(q):
            t[dx, F.sub(f[F.add(x, dx)], F.mul(c, f[x]))] += 1
    return t


def naive_bct(F, f, c, a, b):
    n = 0
    for x in range(F.q):
        for y in range(F.q):
            z = F.add(x, y)
            if F.sub(f[z], F.mul(c, f[x])) != b:
                continue
            if F.sub(F.mul(c, f[F.add(z, a)]), f[F.add(x, a)]) == F.mul(c, b):
                n += 1
    return n


def values(F, d):
    return [F.pow(x, d) for x in range(F.q)]


@pytest.mark.parametrize("p,n,d", [(5, 1, 3), (7, 1, 5), (7, 1, 2), (2, 3, 3), (3, 2, 5), (2, 2, 2)])
def test_tables_match_naive(p, n, d):
    F = GF(p, n)
    f = values(F, d)
    M = monomial_map(F, d)
    for c in range(1, F.q):
        assert np.array_equal(ddt_table(M, c), naive_ddt(F, f, c))
        T = bct_table(M, c)
        for a in range(F.q):
            for b in range(F.q):
                assert T[a, b] == naive_bct(F, f, c, a, b)


@pytest.mark.parametrize("p,n", [(5, 1), (7, 1), (2, 3), (3, 2), (11, 1)])
def test_forms_agree_for_permutations(p, n):
    F = GF(p, n)
    for d in range(1, F.q - 1):
        if not make_monomial_spec(F, d).is_permutation:
            continue
        M = monomial_map(F, d)
        for c in range(1, F.q):
            P = bct_table(M, c, form="pairs")
            Q = bct_table(M, c, form="perm")
            assert np.array_equal(P, Q)
            assert P[2 % F.q, 1] == bct_entry_pairs(M, c, 2 % F.q, 1) == bct_entry_perm(M, c, 2 % F.q, 1)


def test_row_and_entry_helpers():
    F = GF(7)
    M = monomial_map(F, 5)
    T = bct_table(M, 3)
    D = ddt_table(M, 3)
    for a in range(7):
        assert np.array_equal(bct_row(M, 3, a), T[a])
        assert np.array_equal(ddt_row(M, 3, a), D[a])
        for b in range(7):
            assert ddt_entry(M, 3, a, b) == D[a, b]
    assert np.all(D.sum(axis=1) == 7)


@pytest.mark.parametrize("n,expected", [(3, 2), (4, 6), (6, 4)])
def test_classical_inverse_boomerang(n, expected):
    # x^(2^n - 2) with c = 1: 2 for odd n, 6 for n = 0 mod 4, 4 for n = 2 mod 4
    F = GF(2, n)
    M = monomial_map(F, F.q - 2)
    assert boomerang_uniformity(M, 1).max_entry == expected


def test_classical_apn():
    F = GF(2, 5)
    assert differential_uniformity(monomial_map(F, 3), 1).max_entry == 2
    # x^3 over F_2^5 is APN, so its classical BCT is 2 as well
    assert boomerang_uniformity(monomial_map(F, 3), 1).max_entry == 2


def test_ddt_c1_excludes_zero_row():
    F = GF(7)
    M = monomial_map(F, 5)
    assert differential_uniformity(M, 1).max_entry < 7
    # with c != 1 the dx = 0 row counts: (1 - c) x^5 = 0 has one solution
    rep = differential_uniformity(M, 2)
    assert rep.max_entry == ddt_table(M, 2).max()


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (5, 1), (7, 1), (2, 4), (13, 1)])
def test_special_cases(p, n):
    F = GF(p, n)
    for d in range(2, F.q - 1):
        if not make_monomial_spec(F, d).is_permutation:
            continue
        M = monomial_map(F, d)
        for c in range(1, F.q):
            T = bct_table(M, c)
            assert np.all(T[0, 1:] == special_case_expected("a_zero", F, c))
            assert np.all(T[1:, 0] == special_case_expected("b_zero", F, c))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_linearized_closed_form(p):
    F = GF(p, 2)
    M = monomial_map(F, p)
    for c in range(1, F.q):
        T = bct_table(M, c)
        for a in range(F.q):
            assert np.all(T[a] == linearized_entry_expected(F, c, a))


def test_linearized_sum_of_frobenius():
    F = GF(3, 2)
    # x^3 + t x is additive and bijective when -t is not a square
    maps = [FieldMap.from_callable(F, lambda x, t=t: F.add(F.pow(x, 3), F.mul(np.int64(t), x))) for t in range(1, 9)]
    perms = [f for f in maps if f.is_bijective()]
    assert perms
    for f in perms:
        for c in range(1, F.q):
            T = bct_table(f, c)
            for a in range(F.q):
                assert np.all(T[a] == linearized_entry_expected(F, c, a))


def test_inverse_ddt_relation():
    F = GF(11)
    for d in (3, 7):
        m = make_monomial_spec(F, d)
        for c in (1, 2, 10):
            for dx in range(11):
                for dy in range(11):
                    assert ddt_inverse_relation_check(F, m, c, dx, dy)


def test_report_shape():
    F = GF(7)
    M = monomial_map(F, 5)
    rep = boomerang_uniformity(M, 2, bound=25, meta={"map": "x^5"})
    d = rep.to_dict()
    assert list(d)[:7] == ["schema_version", "kind", "c", "max_entry", "argmax", "bound", "bound_satisfied"]
    assert d["bound_satisfied"] is True and d["map"] == "x^5"
    assert "elapsed_ms" not in d
    json.dumps(d)
    assert boomerang_uniformity(M, 2, bound=1).bound_satisfied is False
    big = boomerang_uniformity(monomial_map(GF(2, 4), 1), 1)
    assert len(big.argmax) == ARGMAX_LIMIT


def test_vector_maps():
    F = GF(3)
    V = VectorSpace(F, 2)
    # (x1, x2) -> (x2, x1 + x2^2), a triangular bijection
    f = FieldMap.from_callable(F, lambda v: np.stack([v[:, 1], F.add(v[:, 0], F.pow(v[:, 1], 2))], axis=1), n=2)
    assert f.is_bijective()
    for c in (1, 2):
        P = bct_table(f, c, form="pairs")
        assert np.array_equal(P, bct_table(f, c, form="perm"))
        a, b = V.index((1, 2)), V.index((0, 1))
        assert P[a, b] == bct_entry_pairs(f, c, (1, 2), (0, 1))
    rep = boomerang_uniformity(f, 2)
    assert all(len(x) == 2 and len(x[0]) == 2 for x in rep.argmax)


def test_errors():
    F = GF(7)
    with pytest.raises(ValueError):
        bct_table(monomial_map(F, 5), 0)
    with pytest.raises(NotBijectiveError):
        bct_table(monomial_map(F, 2), 1, form="perm")
    with pytest.raises(EnumerationCapError):
        bct_table(monomial_map(GF(2, 6), 5), 1, cap=1000)
    with pytest.raises(ValueError):
        bct_table(monomial_map(F, 5), 1, form="nope")


def test_workers_do_not_change_tables():
    F = GF(13)
    M = monomial_map(F, 5)
    assert np.array_equal(bct_table(M, 4, workers=1), bct_table(M, 4, workers=3))


def test_csv_rows():
    M = monomial_map(GF(7), 5)
    rows = list(table_rows(M, bct_table(M, 2)))
    assert len(rows) == 36 and rows[0][:2] == ("1", "1")


PERMS = [(GF(5), 3), (GF(7), 5), (GF(2, 3), 3), (GF(3, 2), 5), (GF(11), 7)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PERMS), st.data())
def test_entry_forms_property(fd, data):
    F, d = fd
    M = monomial_map(F, d)
    c = data.draw(st.integers(1, F.q - 1))
    a = data.draw(st.integers(0, F.q - 1))
    b = data.draw(st.integers(0, F.q - 1))
    assert bct_entry_pairs(M, c, a, b) == bct_entry_perm(M, c, a, b)
    # scaling a by t and b by t^d leaves a monomial's entry unchanged
    t = data.draw(st.integers(1, F.q - 1))
    assert bct_entry_pairs(M, c, F.mul(t, a), F.mul(F.pow(t, d), b)) == bct_entry_pairs(M, c, a, b)
