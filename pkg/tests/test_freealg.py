from hypothesis import given, strategies as st

from qdiff.freealg import FreePoly, block_size, poly_text, word_basis
from qdiff.scalars import QQ

words = st.lists(st.integers(1, 3), max_size=4).map(tuple)
polys = st.dictionaries(words, st.integers(-5, 5), max_size=4).map(
    lambda d: FreePoly(3, {w: QQ(c) for w, c in d.items() if c}))


def test_word_basis_counts_multinomials():
    assert len(word_basis((1, 1, 1))) == 6
    assert len(word_basis((2, 1))) == 3
    assert block_size((2, 2, 1)) == 30
    assert word_basis((1, 1)) == ((1, 2), (2, 1))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a


@given(polys, polys)
def test_multidegree_additive(a, b):
    p = a * b
    for d in p.multidegrees():
        assert any(tuple(x + y for x, y in zip(da, db)) == d
                   for da in a.multidegrees() for db in b.multidegrees())


def test_canonical_text():
    x1, x2 = FreePoly.gen(2, 1), FreePoly.gen(2, 2)
    assert poly_text(x1 * x2 - (x2 * x1).scale(QQ(3))) == "x1*x2 - 3*x2*x1"
    assert poly_text(FreePoly(2)) == "0"
