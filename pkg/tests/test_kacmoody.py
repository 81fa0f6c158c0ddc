import pytest

from qdiff import kacmoody as km
from qdiff.constants import is_constant
from qdiff.freealg import FreePoly
from qdiff.qstructure import ConstraintError, generic_params, param_from_constraints, q_bracket


def test_serre_constants_on_their_surface():
    for k in (1, 2, 3):
        p = param_from_constraints(2, [km.serre_relation(1, 2, k)])
        assert is_constant(km.serre_constant(1, 2, k, p), p)
        assert not is_constant(km.serre_constant(1, 2, k, generic_params(2)), generic_params(2))


def test_cartan_roundtrip_and_inference():
    for kind, rank in (("A", 3), ("C", 3), ("B", 2), ("B", 3)):
        cd = km.cartan_type(kind, rank)
        assert km.CartanData.from_matrix(cd.matrix()) == cd
        p = km.cartan_constraints(cd)
        assert km.infer_cartan(p) == cd
    assert km.cartan_type("C", 3).matrix() == [[2, -1, 0], [-1, 2, -2], [0, -1, 2]]
    assert km.infer_cartan(generic_params(2)) is None


def test_proportional():
    x = FreePoly.gen(2, 1) * FreePoly.gen(2, 2)
    assert km.proportional(x.scale(3), x) == 3
    assert km.proportional(FreePoly(2), x) == 0
    assert km.proportional(FreePoly.gen(2, 1), x) is None


@pytest.mark.parametrize("kind,ell", [("A", 3), ("A", 4), ("C", 3)])
def test_root_vector_towers(kind, ell):
    p = km.cartan_constraints(km.cartan_type(kind, ell))
    seq = km.build_root_vectors_A(ell, p) if kind == "A" else km.build_root_vectors_C(ell, p)
    rep = (km.verify_A if kind == "A" else km.verify_C)(seq, p)
    assert rep.ok, [c.name for c in rep.failures()]


def test_b_coefficients_literal_and_step_agree():
    ell = 4
    p = km.cartan_constraints(km.cartan_type("C", ell))
    # the vanishing relations use n >= 2; n = 1 is the raising step
    for m in range(1, ell):
        assert km.b_pair(m, 1, ell, p) == km.b_coeff(m, ell, p)
        for n in range(2, m + 1):
            assert km.b_pair(m, n, ell, p) == km.b_pair_literal(m, n, ell, p)


def test_wrong_surface_is_rejected():
    with pytest.raises(ConstraintError):
        km.verify_A(km.build_root_vectors_A(3, generic_params(3)), generic_params(3))


def test_b2_survivor():
    p = km.cartan_constraints(km.cartan_type("B", 2))
    res = km.solve_b2(p)
    Q = p.Q
    x1, x2 = FreePoly.gen(2, 1), FreePoly.gen(2, 2)
    c221 = q_bracket(q_bracket(x1, x2, Q[2][1]), x2, Q[2][1] * Q[1][1])
    assert len(res.candidates) == 3 and res.complete
    (e, a1, a2), = res.survivors
    assert km.proportional(e, c221) not in (None, 0)
    assert a1 == Q[1][2] ** 2 * Q[2][2] ** 2
    assert a2 == Q[2][1] * Q[2][2]


def test_b2_candidates_match_displayed_values():
    p = km.cartan_constraints(km.cartan_type("B", 2))
    res = km.solve_b2(p)
    displayed = km.b2_displayed_candidates(p)
    for e, a2, _ in res.candidates:
        assert any(a == a2 and km.proportional(e, de) not in (None, 0) for de, a in displayed)


def test_lie_limit_top_element_nonzero():
    for kind in ("B2", "B3"):
        gens, top = km.lie_generators(kind)
        assert top.any()


def test_b3_small_grid_and_controls():
    p = km.cartan_constraints(km.cartan_type("B", 3))
    res = km.search_b3(p, exponent_bound=2)
    assert not res.qualifying
    assert km.zero_scalar_control(p)
    p2 = km.cartan_constraints(km.cartan_type("B", 2))
    assert len(km.search_b2_control(p2, exponent_bound=3).qualifying) == 1
