import random

from hypothesis import given, strategies as st

from qdiff.acceptance import random_chain, random_poly, zeta3_point
from qdiff.freealg import FreePoly
from qdiff.qstructure import Relation, generic_params, param_from_constraints, sigma_powers
from qdiff.taylor import (Coboundary, OneForm, PForm, RandomCochain, exact_form, hochschild_boundary,
                          is_closed, is_strongly_closed, pform_is_strongly_closed,
                          single_generator_coefficient, solve_gradient, taylor_closed_form,
                          taylor_coefficients, taylor_reconstruct, taylor_residual_ok)

P2 = generic_params(2)
S12 = param_from_constraints(2, [Relation.make(sigma_powers(1, 2), 1, "sigma(1,2) = 1")])
C2 = taylor_coefficients(P2, 4)
CS = taylor_coefficients(S12, 4)


@given(st.integers(0, 10 ** 6))
def test_reconstruction_generic(seed):
    x = random_poly(2, P2, random.Random(seed))
    rec = taylor_reconstruct(x, P2, C2)
    assert rec.ok
    assert rec.constant_term == x.component((0, 0)) if x.component((0, 0)) else not rec.constant_term


@given(st.integers(0, 10 ** 6))
def test_reconstruction_sigma12(seed):
    assert taylor_reconstruct(random_poly(2, S12, random.Random(seed)), S12, CS).ok


def test_low_order_coefficients():
    Q = P2.Q
    x1, x2 = FreePoly.gen(2, 1), FreePoly.gen(2, 2)
    assert C2[(1,)] == x1
    assert C2[(1, 1)] == FreePoly.word(2, (1, 1), -Q[1][1] / (1 + Q[1][1]))
    s = P2.sigma(1, 2)
    expect = (x1 * x2 - (x2 * x1).scale(Q[2][1])).scale(-Q[1][2] / (1 - s))
    assert C2[(1, 2)] == expect


def test_closed_forms():
    p1 = generic_params(1)
    c1 = taylor_coefficients(p1, 5)
    for k in range(1, 6):
        assert c1[(1,) * k] == single_generator_coefficient(k, p1)
    for w in [(1, 2), (2, 1, 1), (1, 2, 1, 2)]:
        assert C2[w] == taylor_closed_form(w, P2)


def test_residual_identity():
    assert taylor_residual_ok(taylor_coefficients(P2, 3), P2)
    assert taylor_residual_ok(taylor_coefficients(S12, 3), S12)


def test_root_of_unity_truncation():
    p = zeta3_point()
    c = taylor_coefficients(p, 5)
    assert sorted(c.table) == [(), (1,), (1, 1)]
    assert taylor_reconstruct(FreePoly.word(1, (1, 1, 1, 1)), p, c).ok


@given(st.integers(0, 10 ** 6))
def test_exact_forms_integrate(seed):
    rng = random.Random(seed)
    x = FreePoly(2, {w: S12.field(rng.randint(1, 5)) for w in [(1, 2, 1), (2, 1, 1)]})
    y = exact_form(x, S12)
    res = solve_gradient(y, (2, 1), S12)
    assert res.ok and exact_form(res.solution, S12) == y
    assert is_strongly_closed(y, S12)[0] and is_closed(y, S12)[0]


def test_obstructed_one_form():
    y = OneForm.of(FreePoly.gen(2, 2), FreePoly(2))
    res = solve_gradient(y, (1, 1), S12)
    assert not res.ok
    assert res.obstructions[0][1] == FreePoly.scalar(2, -S12.Q[2][1])
    assert not is_strongly_closed(y, S12)[0]


def test_generic_one_forms_integrate_uniquely():
    y = OneForm.of(FreePoly.gen(2, 2), FreePoly(2))
    res = solve_gradient(y, (1, 1), P2)
    assert res.ok and res.unique


@given(st.integers(0, 10 ** 6), st.integers(2, 4))
def test_boundary_squares_to_zero(seed, length):
    c = random_chain(2, length, random.Random(seed))
    assert not hochschild_boundary(hochschild_boundary(c))


@given(st.integers(0, 10 ** 4))
def test_coboundary_squares_to_zero(seed):
    tau = RandomCochain(2, P2, seed=seed)
    c = random_chain(2, 2, random.Random(seed))
    assert not Coboundary(Coboundary(tau, P2), P2)(c)


def test_pform_zero_is_closed():
    z = PForm(2, {})
    ok, wit = pform_is_strongly_closed(z, S12, degree_bound=2)
    assert ok and not wit
