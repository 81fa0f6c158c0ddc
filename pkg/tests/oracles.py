"""Independent reference computations on plain Fractions, used only by the tests."""
import itertools
import random
from fractions import Fraction


def partial(i, poly, q):
    """Left twisted derivation on {word: Fraction} with q[(i, j)] Fractions."""
    out = {}
    for w, c in poly.items():
        pref = Fraction(1)
        for k, a in enumerate(w):
            if a == i:
                u = w[:k] + w[k + 1:]
                out[u] = out.get(u, 0) + c * pref
            pref *= q[(i, a)]
    return {u: v for u, v in out.items() if v}


def words_of(d):
    letters = [i + 1 for i, k in enumerate(d) for _ in range(k)]
    return sorted(set(itertools.permutations(letters)))


def rank(rows):
    rows = [list(r) for r in rows]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(rows)) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                f = rows[k][c] / rows[r][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        r += 1
    return r


def constants_dim(d, q, n):
    """dim of the joint kernel of all d_i on the block of multidegree d."""
    words = words_of(d)
    rows = {}
    for col, w in enumerate(words):
        for i in range(1, n + 1):
            for u, v in partial(i, {w: Fraction(1)}, q).items():
                rows.setdefault((i, u), [Fraction(0)] * len(words))[col] += v
    return len(words) - rank(list(rows.values()))


def s_value(u, v, q):
    """((hat u) v)_0 with hat(xi_w) = d_w1 ... d_wk (rightmost acts first)."""
    poly = {tuple(v): Fraction(1)}
    for i in reversed(u):
        poly = partial(i, poly, q)
    return poly.get((), Fraction(0))


def random_point(n, rng, solve=None):
    """Random rational q table; solve(q) may overwrite entries to impose relations."""
    q = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            num = rng.choice([1, -1]) * rng.randint(2, 40)
            q[(i, j)] = Fraction(num, rng.randint(1, 37))
    if solve:
        solve(q)
    return q


def impose_sigma(q, idx):
    """Make sigma over idx equal to 1 by adjusting the last off-diagonal entry."""
    last = (idx[-1], idx[-2])
    prod = Fraction(1)
    for i in idx:
        for j in idx:
            if i != j and (i, j) != last:
                prod *= q[(i, j)]
    q[last] = 1 / prod


def q_binomial_theorem(k, q):
    """Coefficients c_m of prod_{i<k} (1 + q^i z) = sum q^C(m,2) [k m]_q z^m, solved for [k m]_q."""
    poly = [Fraction(1)]
    for i in range(k):
        a = q ** i
        poly = [x + a * y for x, y in zip(poly + [0], [0] + poly)]
    return [poly[m] / q ** (m * (m - 1) // 2) for m in range(k + 1)]


def rng(seed):
    return random.Random(seed)
