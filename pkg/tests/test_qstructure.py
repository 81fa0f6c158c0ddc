import pytest
from hypothesis import given, strategies as st

from qdiff.freealg import FreePoly
from qdiff.qstructure import (ConstraintError, Relation, apply_partial, apply_right_partial,
                              from_table, generic_params, param_from_constraints, sigma_powers,
                              verify_ef_relations)
from qdiff.scalars import QQ, q_integer

P2 = generic_params(2)
P3 = generic_params(3)
homog = st.lists(st.permutations([1, 1, 2, 3]), min_size=1, max_size=3)


def poly_from(perms, params, n=3):
    return FreePoly(n, {tuple(w): params.field(k + 1) for k, w in enumerate(perms)})


def twist(i, d, params):
    out = params.one
    for j, k in enumerate(d, 1):
        out = out * params.Q[i][j] ** k
    return out


@given(homog, homog, st.integers(1, 3))
def test_left_leibniz(a, b, i):
    x, y = poly_from(a, P3), poly_from(b, P3)
    lhs = apply_partial(i, x * y, P3)
    rhs = apply_partial(i, x, P3) * y + (x * apply_partial(i, y, P3)).scale(twist(i, x.multidegree(), P3))
    assert lhs == rhs


@given(homog, st.integers(1, 3), st.integers(1, 3))
def test_left_and_right_derivations_commute(a, i, j):
    x = poly_from(a, P3)
    assert (apply_partial(i, apply_right_partial(j, x, P3), P3)
            == apply_right_partial(j, apply_partial(i, x, P3), P3))


def test_power_rule():
    # d_i(xi_i^r) = [r]_{q_ii} xi_i^(r-1)
    for r in range(1, 6):
        x = FreePoly.word(2, (1,) * r)
        assert apply_partial(1, x, P2) == FreePoly.word(2, (1,) * (r - 1), q_integer(r, P2.Q[1][1]))


def test_constraint_elimination_and_log():
    p = param_from_constraints(2, [Relation.make(sigma_powers(1, 2), 1, "sigma(1,2) = 1")])
    assert p.sigma(1, 2) == 1
    assert p.Q[1][1] != 1 and p.sigma(1, 2) == 1
    assert "eliminate q[2,1]" in p.constraint_log[0]
    d = p.describe()
    assert d["N"] == 2 and d["constraints"] == ["sigma(1,2) = 1"]


@given(st.integers(0, 200))
def test_generic_points_avoid_collisions(seed):
    p = generic_params(3, seed=seed)
    for i in range(1, 4):
        assert p.Q[i][i] ** 2 != 1 and p.Q[i][i] ** 3 != 1
        for j in range(i + 1, 4):
            assert p.sigma(i, j) != 1
    assert p.sigma_set((1, 2, 3)) != 1


def test_inconsistent_constraints():
    a = Relation.make({(1, 1): 1}, 1, "q[1,1] = 1")
    b = Relation.make({(1, 1): 1}, 2, "2 q[1,1] = 1")
    with pytest.raises(ConstraintError):
        param_from_constraints(1, [a, b])


def test_doubled_points_have_square_roots():
    p = param_from_constraints(2, [], doubled=True)
    r = p.sqrt_q(1, 2)
    assert r * r == p.Q[1][2]


def test_ef_relations():
    assert verify_ef_relations(P2, degree_bound=3)["ok"]
    rational = from_table(2, QQ, {(1, 1): 2, (1, 2): 3, (2, 1): QQ(1) / 5, (2, 2): -7})
    assert verify_ef_relations(rational, degree_bound=3)["ok"]
