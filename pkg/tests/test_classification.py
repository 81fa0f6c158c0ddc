import math

import pytest
from hypothesis import given, strategies as st

from qdiff import classification as cl
from qdiff.constants import find_constants, is_constant
from qdiff.qstructure import generic_params

import oracles


@pytest.mark.parametrize("case", sorted(cl.TABLE))
def test_order3_table(case):
    rep = cl.classify_order3(cl.order3_point(case))
    assert rep.case == case and rep.matches_table


def test_table_rows():
    # #constants and dim of the ideal slice in block (1,1,1)
    assert cl.TABLE["sigma123"][:2] == (1, 1)
    assert cl.TABLE["one-pair"][:2] == (1, 2)
    assert cl.TABLE["two-pair"][:2] == (2, 4)
    assert cl.TABLE["three-pair"][:2] == (2, 5)


@given(st.integers(0, 10 ** 6), st.sampled_from([[], [(1, 2)], [(1, 2), (2, 3)], [(1, 2, 3)]]))
def test_order3_constant_counts_against_oracle(seed, rels):
    def solve(q):
        for r in rels:
            oracles.impose_sigma(q, r)
    q = oracles.random_point(3, oracles.rng(seed), solve)
    expected = {0: 0, 1: 1, 2: 2}[len(rels)]
    assert oracles.constants_dim((1, 1, 1), q, 3) == expected


@pytest.mark.parametrize("n,dim", [(3, 1), (4, 2)])
def test_multilinear_dimension(n, dim):
    p = cl.multilinear_point(n)
    assert cl.dim_constants_multilinear(n, p) == dim == cl.predict_dim_multilinear(n, p)
    assert cl.dim_constants_multilinear(n, generic_params(n)) == 0


def test_multilinear_oracle_n4():
    q = oracles.random_point(4, oracles.rng(3), lambda t: oracles.impose_sigma(t, (1, 2, 3, 4)))
    assert oracles.constants_dim((1, 1, 1, 1), q, 4) == 2


def test_hypothesis_violation_is_reported():
    p = cl.order3_point("one-pair")
    with pytest.raises(cl.HypothesisError):
        cl.predict_dim_multilinear(3, p)


def test_closed_form_constants():
    p = cl.order3_point("sigma123")
    c = cl.constant_C123(p)
    assert is_constant(c, p)
    assert is_constant(cl.constant_C123_alt(p), p)
    basis = find_constants((1, 1, 1), p).basis
    assert len(basis) == 1


def test_square_root_forms():
    p = cl.order3_point("sigma123", doubled=True)
    assert is_constant(cl.symmetrize_triple(1, 2, 3, p), p)
    p2 = cl.order3_point("one-pair", doubled=True)
    assert is_constant(cl.antisymmetrize_pair(1, 2, p2), p2)


def test_cube_constant():
    from qdiff.acceptance import zeta3_point
    assert cl.order3_single_generator_check(zeta3_point())
    assert not cl.order3_single_generator_check(generic_params(1))


def test_four_generator_identities():
    p = cl.four_generator_point()
    assert cl.annihilated_words(cl.four_generator_identity(p), (1, 1, 1, 1), p) == (24, 0)
    pd = cl.four_generator_point(doubled=True)
    assert cl.annihilated_words(cl.symmetrized_identity(pd), (1, 1, 1, 1), pd) == (24, 0)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_rational_multilinear_path_agrees(n):
    p = cl.multilinear_rational_point(n, seed=n)
    assert cl.dim_constants_multilinear_rational(n, p) == cl.dim_constants_multilinear(n, p)
    assert cl.dim_constants_multilinear_rational(n, p) == math.factorial(n - 2)
