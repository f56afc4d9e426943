import random

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cboomerang.errors import HypothesisError
from cboomerang.field import GF
from cboomerang.gtds import (
    GTDS,
    Branch,
    RoundSpec,
    bct_bound,
    cipher_eval,
    cipher_invert,
    corollary_bct_bound,
    corollary_bct_probability,
    corollary_ddt_bound,
    ddt_bound,
    full_layer_hypotheses_hold,
    hadamard_weight,
    hamming_weight,
    make_hades,
    pair_system_count,
    pair_system_row,
    random_invertible_matrix,
    round_eval,
    round_invert,
    rounds_from_json,
    two_round_bct_entry,
    two_round_bct_row,
    two_round_targets,
)
from cboomerang.linalg import SingularMatrixError, identity, is_invertible, mat_inv, mat_vec
from cboomerang.polynomial import MultiPoly
from cboomerang.uniformity import bct_table, ddt_table

from gtds_specs import field_specs, monomial_specs


def all_points(g):
    sp = g.space
    return sp.decode(sp.indices())


def naive_eval(g, x):
    F = g.field
    out = []
    for i, b in enumerate(g.branches):
        pi = int(g.p_eval(i, np.array([x[i]]))[0])
        if i == g.n - 1:
            out.append(pi)
            continue
        tail = np.array([x[i + 1:]])
        gi = int(b.g.eval(F, tail)[0]) if b.g else 1
        hi = int(b.h.eval(F, tail)[0]) if b.h else 0
        out.append(F.add(F.mul(pi, gi), hi))
    return out


@pytest.mark.parametrize("q", [5, 7, 11])
def test_eval_and_invert(q):
    for spec in field_specs(q):
        g = GTDS.from_json(spec)
        assert g.is_valid()
        xs = all_points(g)
        ys = g.eval(xs)
        for k in range(0, len(xs), 7):
            assert list(ys[k]) == naive_eval(g, list(xs[k]))
        assert np.array_equal(g.invert(ys), xs)
        assert np.array_equal(g.eval(g.invert(xs)), xs)
        assert g.as_map().is_bijective()


def test_three_branches():
    spec = {"field": {"p": 5}, "branches": [
        {"p": {"monomial": 3}, "g": {"terms": [[[2, 0], 1], [[0, 0], 2]]}, "h": {"terms": [[[1, 1], 1]]}},
        {"p": {"monomial": 3}, "h": {"terms": [[[2], 4]]}},
        {"p": {"monomial": 3}},
    ]}
    g = GTDS.from_json(spec)
    assert g.validate() == []
    xs = all_points(g)
    assert np.array_equal(g.invert(g.eval(xs)), xs)


def test_validate_messages():
    spec = {"field": {"p": 7}, "branches": [{"p": {"monomial": 2}, "g": {"const": 0}}, {"p": {"monomial": 5}}]}
    assert GTDS.from_json(spec).validate() == ["p_1 not a permutation", "g_1 has zero at x_2 = 0"]
    spec = {"field": {"p": 5}, "branches": [{"p": {"monomial": 3}, "g": {"terms": [[[1], 1]]}}, {"p": {"monomial": 3}}]}
    assert GTDS.from_json(spec).validate() == ["g_1 has zero at x_2 = 0"]
    spec = {"field": {"p": 5}, "branches": [{"p": {"monomial": 3}}, {"p": {"monomial": 3}, "h": {"const": 1}}]}
    assert "branch 2 is the last branch and takes no g or h" in GTDS.from_json(spec).validate()


def test_schema_and_json():
    with pytest.raises(jsonschema.ValidationError):
        GTDS.from_json({"field": {"p": 5}, "branches": []})
    with pytest.raises(jsonschema.ValidationError):
        GTDS.from_json({"field": {"p": 5}, "branches": [{"p": {"monomial": 0}}]})
    for spec in field_specs(7):
        g = GTDS.from_json(spec)
        h = GTDS.from_json(g.to_json())
        xs = all_points(g)
        assert np.array_equal(g.eval(xs), h.eval(xs))


def test_weights():
    assert hamming_weight([0, 3, 1, 0]) == 2
    assert hadamard_weight([1, 0, 2], [1, 1, 0]) == 1
    with pytest.raises(ValueError):
        hadamard_weight([1], [1, 2])


@pytest.mark.parametrize("q", [5, 7, 11])
def test_ddt_bound_exhaustive(q):
    for spec in field_specs(q):
        g = GTDS.from_json(spec)
        M = g.as_map()
        sp = g.space
        for c in range(2, q):
            T = ddt_table(M, c)
            for dx in range(sp.size):
                v = sp.vector(dx)
                assert T[dx].max() <= ddt_bound(g, c, v)


def test_ddt_hypotheses():
    g = GTDS.from_json(field_specs(7)[0])
    with pytest.raises(HypothesisError):
        ddt_bound(g, 1, (1, 0))
    lin = GTDS.spn(GF(7), [1, 5])
    with pytest.raises(HypothesisError):
        ddt_bound(lin, 3, (1, 0))
    assert corollary_ddt_bound(g, 3, (1, 0), 5) == 5 * 5
    assert corollary_ddt_bound(g, 3, (0, 1), 5) == 5 * 7


@pytest.mark.parametrize("q", [5, 7])
def test_bct_bound_exhaustive(q):
    for g in monomial_specs(q):
        sp = g.space
        ds = g.monomial_exponents()
        for c in range(1, q):
            T = bct_table(g.as_map(), c)
            for a in range(1, sp.size):
                av = sp.vector(a)
                for b in range(1, sp.size):
                    bv = sp.vector(b)
                    assert T[a, b] <= bct_bound(g, c, av, bv)
                    if min(ds) > 1:
                        assert T[a, b] <= corollary_bct_bound(g, c, av, bv, max(ds))


def test_printed_last_factor_counterexample():
    # identity on the last branch with c = -1 and a_n = 0 gives q solutions there
    g = GTDS.spn(GF(5), [3, 1])
    T = bct_table(g.as_map(), 4)
    sp = g.space
    entry = T[sp.index((4, 0)), sp.index((3, 4))]
    assert entry == 10
    assert bct_bound(g, 4, (4, 0), (3, 4), as_printed=True) == 9
    assert bct_bound(g, 4, (4, 0), (3, 4)) == 45


def test_bct_bound_values():
    g = GTDS.spn(GF(7), [5, 5])
    assert bct_bound(g, 2, (1, 1), (1, 1)) == 625
    assert bct_bound(g, 2, (1, 0), (1, 1)) == 25 * 7
    assert corollary_bct_bound(g, 2, (1, 0), (1, 1), 5) == 7 * 25
    assert corollary_bct_probability(g, 2, (1, 1), (1, 1), 5) == 625 / 49
    lin = GTDS.spn(GF(7), [5, 1])
    assert bct_bound(lin, 1, (1, 1), (1, 1)) == 25 * 7
    assert bct_bound(lin, 2, (1, 1), (1, 1)) == 25
    with pytest.raises(HypothesisError):
        bct_bound(GTDS.from_json(field_specs(7)[2]), 2, (1, 1), (1, 1))
    with pytest.raises(HypothesisError):
        corollary_bct_bound(lin, 2, (1, 1), (1, 1), 5)


def test_linalg():
    F = GF(7)
    A = [[1, 2], [3, 4]]
    Ai = mat_inv(F, A)
    v = np.array([[5, 6], [0, 1]])
    assert np.array_equal(mat_vec(F, Ai, mat_vec(F, A, v)), v)
    assert mat_inv(F, identity(3)) == identity(3)
    assert not is_invertible(F, [[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError):
        mat_inv(F, [[0, 0], [0, 0]])
    rng = random.Random(1)
    for _ in range(20):
        assert is_invertible(F, random_invertible_matrix(F, 3, rng))


def test_rounds_and_cipher():
    F = GF(11)
    rng = random.Random(5)
    A = random_invertible_matrix(F, 2, rng)
    consts = [[rng.randrange(11) for _ in range(2)] for _ in range(5)]
    keys = [[rng.randrange(11) for _ in range(2)] for _ in range(5)]
    rounds = make_hades(F, 2, 3, 2, 1, A, consts, keys)
    assert [r.gtds.monomial_exponents() for r in rounds] == [[3, 3]] * 2 + [[3, 1]] + [[3, 3]] * 2
    xs = all_points(rounds[0].gtds)
    k0 = [4, 9]
    assert np.array_equal(cipher_invert(rounds, k0, cipher_eval(rounds, k0, xs)), xs)
    for r in rounds:
        assert np.array_equal(round_invert(r, round_eval(r, xs)), xs)
    with pytest.raises(ValueError):
        make_hades(F, 2, 3, 2, 1, A, consts[:3])
    with pytest.raises(HypothesisError):
        make_hades(F, 2, 2, 1, 0, A, consts[:2])
    assert full_layer_hypotheses_hold(rounds[0].gtds)
    assert not full_layer_hypotheses_hold(rounds[2].gtds)


def test_rounds_from_json():
    g = GTDS.spn(GF(5), [3, 3])
    obj = {"matrix": [[1, 1], [0, 1]], "constants": [[1, 2], [3, 4]], "keys": [[0, 1], [1, 1], [2, 2]]}
    rounds, k0 = rounds_from_json(obj, g)
    assert len(rounds) == 2 and k0 == [0, 1] and rounds[1].key == [2, 2]
    rounds, k0 = rounds_from_json({}, g)
    assert len(rounds) == 1 and rounds[0].matrix == identity(2)
    with pytest.raises(ValueError):
        rounds_from_json({"constants": [[1, 2]], "keys": [[0, 0]]}, g)
    with pytest.raises(SingularMatrixError):
        rounds_from_json({"matrix": [[1, 1], [1, 1]]}, g)


def _hades_pair(q, d, c_keys_equal, seed):
    F = GF(q)
    rng = random.Random(seed)
    A = random_invertible_matrix(F, 2, rng)
    consts = [[rng.randrange(q) for _ in range(2)] for _ in range(2)]
    if c_keys_equal:
        k = [rng.randrange(q) for _ in range(2)]
        keys = [k, k]
    else:
        keys = [[rng.randrange(q) for _ in range(2)] for _ in range(2)]
    g = GTDS.spn(F, [d, d])
    return RoundSpec(g, A, consts[0], keys[0]), RoundSpec(g, A, consts[1], keys[1])


@pytest.mark.parametrize("q,d,equal,cs", [(7, 5, True, [1]), (7, 5, False, [1, 3, 6]), (5, 3, False, [2, 4])])
def test_two_round_reduction(q, d, equal, cs):
    r0, r1 = _hades_pair(q, d, equal, seed=q + d)
    sp = r0.gtds.space
    M = r0.gtds.as_map()
    for c in cs:
        tg = [two_round_targets(r0, r1, c, sp.vector(b)) for b in range(sp.size)]
        t1 = np.array([sp.index(t[0]) for t in tg])
        t2 = np.array([sp.index(t[1]) for t in tg])
        for a in range(sp.size):
            av = sp.vector(a)
            direct = two_round_bct_row(r0, r1, c, av)
            assert np.array_equal(direct, pair_system_row(M, c, av)[t1, t2])
            b = (a * 7) % sp.size
            assert direct[b] == two_round_bct_entry(r0, r1, c, av, sp.vector(b))
            assert direct[b] == pair_system_count(M, c, av, tg[b][0], tg[b][1])


def test_two_round_needs_shared_layer():
    F = GF(5)
    r0 = RoundSpec(GTDS.spn(F, [3, 3]))
    r1 = RoundSpec(GTDS.spn(F, [3, 1]))
    with pytest.raises(ValueError):
        two_round_bct_entry(r0, r1, 1, (1, 0), (0, 1))
    r2 = RoundSpec(GTDS.spn(F, [3, 3]), [[1, 1], [0, 1]])
    with pytest.raises(ValueError):
        two_round_targets(r0, r2, 1, (0, 1))


def test_branch_and_degree():
    F = GF(11)
    g = GTDS(F, [Branch(13), Branch(3)])
    assert g.degree(0) == 3  # x^13 acts as x^3 on F_11
    assert g.degree(1) == 3
    with pytest.raises(HypothesisError):
        GTDS(F, [Branch(3, h=MultiPoly({(1,): 1}, 1)), Branch(3)]).monomial_exponents()
    with pytest.raises(HypothesisError):
        GTDS.spn(GF(5), [2, 3]).monomial_exponents()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.integers(0, 4), st.data())
def test_invert_property(q, k, data):
    g = GTDS.from_json(field_specs(q)[k])
    x = [data.draw(st.integers(0, q - 1)) for _ in range(2)]
    y = g.eval(np.array([x]))
    assert list(g.invert(y)[0]) == x
