import pytest
from hypothesis import given, strategies as st

from qdiff.constants import (extend_constant, find_constants, generated_slice,
                             ideal_slice, is_constant, normal_form, quotient_basis, s_form, s_gram,
                             t_gram)
from qdiff.freealg import FreePoly
from qdiff.qstructure import Relation, from_table, generic_params, param_from_constraints, sigma_powers
from qdiff.scalars import QQ
from qdiff import linalg

import oracles


def sigma12_point(seed=0):
    return param_from_constraints(2, [Relation.make(sigma_powers(1, 2), 1, "sigma(1,2) = 1")], seed=seed)


def rational_point(q, n):
    return from_table(n, QQ, q)


def test_sigma12_constant_is_the_q_commutator():
    p = sigma12_point()
    basis = find_constants((1, 1), p).basis
    x1, x2 = FreePoly.gen(2, 1), FreePoly.gen(2, 2)
    assert len(basis) == 1
    assert basis[0] == x1 * x2 - (x2 * x1).scale(p.Q[2][1])
    assert is_constant(basis[0], p)


def test_no_constants_generically():
    p = generic_params(2)
    for d in [(1, 1), (2, 1), (1, 2), (2, 2)]:
        assert not find_constants(d, p).basis


@given(st.integers(0, 10 ** 6), st.sampled_from([(1, 1, 1), (2, 1, 0), (2, 1, 1), (1, 1, 2)]),
       st.sampled_from([None, (1, 2), (2, 3), (1, 2, 3)]))
def test_constant_dimension_matches_oracle(seed, d, rel):
    r = oracles.rng(seed)
    q = oracles.random_point(3, r, (lambda t: oracles.impose_sigma(t, rel)) if rel else None)
    p = rational_point(q, 3)
    assert len(find_constants(d, p)) == oracles.constants_dim(d, q, 3)


@given(st.integers(0, 10 ** 6), st.sampled_from([(1, 1), (2, 1), (1, 2), (2, 2)]))
def test_gram_matches_oracle_and_is_symmetric(seed, d):
    q = oracles.random_point(2, oracles.rng(seed))
    p = rational_point(q, 2)
    g = s_gram(d, p)
    for a, u in enumerate(g.words):
        for b, v in enumerate(g.words):
            ref = oracles.s_value(u, v, q)
            assert g.matrix[a][b] == QQ(ref)
            assert g.matrix[a][b] == g.matrix[b][a]


def test_gram_degree_one_one():
    p = generic_params(2)
    g = s_gram((1, 1), p).matrix
    Q = p.Q
    # words (x1 x2, x2 x1); S(x1x2, x1x2) = q21, S(x1x2, x2x1) = 1, S(x2x1, x2x1) = q12
    assert g == [[Q[2][1], p.one], [p.one, Q[1][2]]]
    assert s_form(FreePoly.gen(2, 1), FreePoly.gen(2, 1), p) == 1


def test_gram_inverse_generic():
    p = generic_params(2)
    words, t = t_gram((2, 1), p)
    g = s_gram((2, 1), p).matrix
    prod = linalg.mat_mul(g, t)
    assert all(prod[i][j] == (1 if i == j else 0) for i in range(3) for j in range(3))


@given(st.integers(0, 50))
def test_radical_equals_generated_slice(seed):
    p = param_from_constraints(3, [Relation.make(sigma_powers(1, 2), 1), Relation.make(sigma_powers(2, 3), 1)],
                               seed=seed)
    for d in [(1, 1, 1), (2, 1, 1), (1, 2, 0)]:
        a, b = ideal_slice(d, p), generated_slice(d, p)
        assert a.pivots == b.pivots and a.rows == b.rows


def test_cross_check_flag_and_quotient():
    p = sigma12_point()
    sl = ideal_slice((2, 1), p, cross_check=True)
    qb = quotient_basis((2, 1), p)
    assert sl.dim == 2 and qb.dim == 1 and qb.words == [(2, 1, 1)]
    x = FreePoly.word(2, (1, 2, 1))
    nf = normal_form(x, p)
    assert set(nf.terms) <= {(2, 1, 1)}
    assert normal_form(x - nf, p) == FreePoly(2)


@pytest.mark.parametrize("x", [(1,), (2,), (1, 2)])
def test_extend_constant_returns_constants(x):
    p = sigma12_point()
    c = find_constants((1, 1), p).basis[0]
    ext = extend_constant(c, x, p)
    if ext.ok:
        assert is_constant(ext.constant, p)
    else:
        assert ext.obstruction


def test_constant_count_is_rank_drop():
    from qdiff.constants import kernel_consistency
    p = sigma12_point()
    for d in [(1, 1), (2, 1), (2, 2)]:
        info = kernel_consistency(d, p)
        assert info["constants"] == info["stacked_rank_drop"]


def test_ideal_absorbs_products():
    # the generated slice of an ideal element lies in the ideal: C12 * x1 reduces to 0
    p = sigma12_point()
    c = find_constants((1, 1), p).basis[0]
    assert normal_form(c * FreePoly.gen(2, 1), p) == FreePoly(2)
    assert normal_form(FreePoly.gen(2, 2) * c, p) == FreePoly(2)


def test_extension_obstruction_at_minus_one():
    p = param_from_constraints(2, [Relation.make({(1, 1): 1}, -1, "q[1,1] = -1")])
    c = find_constants((2, 0), p).basis[0]
    assert c == FreePoly.word(2, (1, 1))
    ext = extend_constant(c, (1,), p)
    assert not ext.ok and ext.obstruction
