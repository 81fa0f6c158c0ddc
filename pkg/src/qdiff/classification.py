"""Multilinear constants, the order-3 classification and closed forms of order-3 constants."""
import itertools
import math
import random
from dataclasses import dataclass, field

import flint

from .constants import ConsistencyError, find_constants, ideal_slice, is_constant
from .freealg import FreePoly, word_basis
from .qstructure import (OperatorPoly, Relation, from_table, hat_map, mul_powers, operator_apply,
                         param_from_constraints, scale_powers, sigma_powers, stacked_derivations)
from .scalars import QQ, fmpq, q_integer


class HypothesisError(ValueError):
    """Constants already exist in a proper multilinear sub-block."""


def _block(n, subset):
    return tuple(1 if i in subset else 0 for i in range(1, n + 1))


# ---------------------------------------------------------------- multilinear blocks

def dim_constants_multilinear(n, params):
    if n > params.n:
        raise ValueError(f"n={n} exceeds N={params.n}")
    return len(find_constants(_block(params.n, range(1, n + 1)), params))


def proper_subset_constants(n, params):
    """Subsets s of {1..n}, 2 <= |s| < n, whose multilinear block carries constants."""
    bad = []
    for size in range(2, n):
        for s in itertools.combinations(range(1, n + 1), size):
            if len(find_constants(_block(params.n, s), params)):
                bad.append(s)
    return bad


def predict_dim_multilinear(n, params, check_hypothesis=True):
    """(n-2)! when sigma_(1..n) = 1, else 0; needs no constants on proper subsets."""
    if check_hypothesis:
        bad = proper_subset_constants(n, params)
        if bad:
            raise HypothesisError(f"constants on proper subsets {bad}")
    return math.factorial(n - 2) if params.sigma_set(range(1, n + 1)) == 1 else 0


def multilinear_point(n, seed=0, **kw):
    """sigma_(1..n) = 1 with every proper subset generic."""
    rel = Relation.make(sigma_powers(*range(1, n + 1)), 1, f"sigma({','.join(map(str, range(1, n + 1)))}) = 1")
    return param_from_constraints(n, [rel], seed=seed, **kw)


def multilinear_rational_point(n, seed=0, constrained=True):
    """Random rational q; with constrained, sigma_(1..n) = 1 is solved for q[n, n-1]."""
    rng = random.Random(seed)
    q = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            q[(i, j)] = fmpq(rng.choice([1, -1]) * rng.randint(2, 40), rng.randint(1, 37))
    if not constrained:
        return from_table(n, QQ, q, ["random rationals"])
    prod = fmpq(1)
    for (i, j), v in q.items():
        if i != j and (i, j) != (n, n - 1):
            prod *= v
    q[(n, n - 1)] = 1 / prod
    return from_table(n, QQ, q, [f"random rationals, sigma(1..{n}) = 1 via q[{n},{n - 1}]"])


def dim_constants_multilinear_rational(n, params):
    """Same dimension as dim_constants_multilinear, via flint rank over Q (rational backend only)."""
    if params.field != QQ:
        raise ValueError("needs the rational backend")
    d = _block(params.n, range(1, n + 1))
    rows = stacked_derivations(d, params)
    m = len(word_basis(d))
    mat = flint.fmpq_mat(len(rows), m)
    for r, row in enumerate(rows):
        for c, v in row.items():
            mat[r, c] = v
    return m - mat.rank()


# ---------------------------------------------------------------- order 3

TABLE = {
    # case: (#constants, dim of ideal slice, dim of quotient)
    "generic": (0, 0, 6),
    "sigma123": (1, 1, 5),
    "one-pair": (1, 2, 4),
    "two-pair": (2, 4, 2),
    "three-pair": (2, 5, 1),
    "pair-plus-sigma123": (1, 2, 4),
}


@dataclass
class Order3Report:
    case: str
    constants: list
    ideal_dim: int
    quotient_dim: int
    factors: dict = field(default_factory=dict)
    expected: tuple = ()

    @property
    def matches_table(self):
        return (len(self.constants), self.ideal_dim, self.quotient_dim) == self.expected


def order3_factors(params):
    s = params.sigma
    return {"sigma12": s(1, 2), "sigma23": s(2, 3), "sigma13": s(1, 3),
            "sigma123": params.sigma_set((1, 2, 3))}


def order3_case(params):
    f = order3_factors(params)
    pairs = sum(1 for k in ("sigma12", "sigma23", "sigma13") if f[k] == 1)
    full = f["sigma123"] == 1
    if pairs == 0:
        return "sigma123" if full else "generic"
    if pairs == 1:
        return "pair-plus-sigma123" if full else "one-pair"
    return "two-pair" if pairs == 2 else "three-pair"


def classify_order3(params):
    if params.n < 3:
        raise ValueError("need N >= 3")
    d = _block(params.n, (1, 2, 3))
    cons = find_constants(d, params).basis
    sl = ideal_slice(d, params)
    case = order3_case(params)
    rep = Order3Report(case, cons, sl.dim, 6 - sl.dim,
                       {k: str(v) for k, v in order3_factors(params).items()}, TABLE[case])
    if bool(cons) != (case != "generic"):
        raise ConsistencyError("existence of constants disagrees with the sigma factors")
    return rep


def order3_constraints(case):
    """Constraint list realizing each order-3 case."""
    s = sigma_powers
    one = {
        "generic": [],
        "sigma123": [(s(1, 2, 3), "sigma(1,2,3) = 1")],
        "one-pair": [(s(1, 2), "sigma(1,2) = 1")],
        "two-pair": [(s(1, 2), "sigma(1,2) = 1"), (s(2, 3), "sigma(2,3) = 1")],
        "three-pair": [(s(1, 2), "sigma(1,2) = 1"), (s(2, 3), "sigma(2,3) = 1"), (s(1, 3), "sigma(1,3) = 1")],
        "pair-plus-sigma123": [(s(1, 2), "sigma(1,2) = 1"), (s(1, 2, 3), "sigma(1,2,3) = 1")],
    }[case]
    return [Relation.make(p, 1, t) for p, t in one]


def order3_point(case, seed=0, n=3, **kw):
    return param_from_constraints(n, order3_constraints(case), seed=seed, **kw)


# ---------------------------------------------------------------- closed forms

def _x(n, i):
    return FreePoly.gen(n, i)


def constant_C123(params, labels=(1, 2, 3)):
    """(1/q31 - q13)(x1 x2 x3 + q31 q32 q21 x3 x2 x1) + cyclic, relabeled by labels."""
    n, Q = params.n, params.Q
    out = FreePoly(n)
    for r in range(3):
        a, b, c = (labels[(k + r) % 3] for k in range(3))
        coeff = 1 / Q[c][a] - Q[a][c]
        out = out + FreePoly.word(n, (a, b, c), coeff)
        out = out + FreePoly.word(n, (c, b, a), coeff * Q[c][a] * Q[c][b] * Q[b][a])
    return out


def constant_C123_alt(params, labels=(1, 2, 3)):
    """(1/q12)(x2 (x3 x1 + s12 q13 x1 x3) - q32 q12 (x3 x1 + s12 q13 x1 x3) x2) + cyclic."""
    n, Q = params.n, params.Q
    out = FreePoly(n)
    for r in range(3):
        a, b, c = (labels[(k + r) % 3] for k in range(3))
        inner = _x(n, c) * _x(n, a) + (_x(n, a) * _x(n, c)).scale(params.sigma(a, b) * Q[a][c])
        term = _x(n, b) * inner - (inner * _x(n, b)).scale(Q[c][b] * Q[a][b])
        out = out + term.scale(1 / Q[a][b])
    return out


def antisymmetrize_pair(i, j, params):
    """(1 - P_ij) sqrt(q_ij) x_i x_j."""
    n = params.n
    return (FreePoly.word(n, (i, j), params.sqrt_q(i, j))
            - FreePoly.word(n, (j, i), params.sqrt_q(j, i)))


def symmetrize_triple(i, j, k, params):
    """Sum over the six relabelings of sqrt(q_ij q_jk q_ki)(1/q_ki - q_ik) x_i x_j x_k."""
    n, Q = params.n, params.Q
    out = FreePoly(n)
    for a, b, c in itertools.permutations((i, j, k)):
        root = params.sqrt_monomial({(a, b): 1, (b, c): 1, (c, a): 1})
        out = out + FreePoly.word(n, (a, b, c), root * (1 / Q[c][a] - Q[a][c]))
    return out


def order3_single_generator_check(params, i=1):
    """x_i^3 is a constant iff [3]_{q_ii} = 0; cross-checked against the kernel."""
    d = tuple(3 if k == i else 0 for k in range(1, params.n + 1))
    predicted = not q_integer(3, params.Q[i][i])
    cube = FreePoly.word(params.n, (i,) * 3)
    found = any(c == cube for c in find_constants(d, params).basis)
    if found != predicted or found != is_constant(cube, params):
        raise ConsistencyError("cube constant test disagrees with the kernel")
    return found


# ---------------------------------------------------------------- four-generator identities

def four_generator_point(seed=0, doubled=False):
    """sigma_123 = sigma_124 = sigma_134 = sigma_234 = 1 with sigma_ij = sigma_kl."""
    s = sigma_powers
    rels = [Relation.make(mul_powers(s(1, 2), scale_powers(s(3, 4), -1)), 1, "sigma(1,2) = sigma(3,4)"),
            Relation.make(mul_powers(s(1, 3), scale_powers(s(2, 4), -1)), 1, "sigma(1,3) = sigma(2,4)"),
            Relation.make(mul_powers(s(1, 4), scale_powers(s(2, 3), -1)), 1, "sigma(1,4) = sigma(2,3)"),
            Relation.make(s(1, 2, 3), 1, "sigma(1,2,3) = 1")]
    return param_from_constraints(4, rels, seed=seed, doubled=doubled)


def four_generator_identity(params):
    """The operator combination of d-hat and C-hat that should vanish on block (1,1,1,1)."""
    n, Q = params.n, params.Q

    def d(i):
        return hat_map(_x(n, i))

    def C(a, b, c):
        return hat_map(constant_C123_alt(params, (a, b, c)))
    return (d(4) * C(1, 2, 3)
            + (d(1) * C(2, 3, 4)).scale(Q[1][4] * Q[1][3] * Q[3][4])
            + (d(2) * C(1, 3, 4)).scale(Q[2][1] * Q[1][3] / (Q[4][2] * Q[4][3]))
            + (d(3) * C(1, 2, 4)).scale(Q[3][4] * Q[3][2] * Q[2][4])
            - (C(4, 1, 2) * d(3)).scale(Q[2][4] / Q[3][1])
            - (C(4, 2, 3) * d(1)).scale(Q[3][4] / Q[1][2])
            - (C(4, 1, 3) * d(2)).scale(Q[1][3] * Q[3][2] * Q[3][4])
            - (C(1, 2, 3) * d(4)).scale(Q[1][4] * Q[2][4] * Q[3][4]))


def symmetrized_identity(params):
    """(sqrt(q12 q13 q14) d1 C234 - sqrt(q21 q31 q41) C234 d1) + cyclic in 1..4."""
    n = params.n
    op = OperatorPoly(n)
    for r in range(4):
        a, b, c, e = ((k + r) % 4 + 1 for k in range(4))
        cc = hat_map(symmetrize_triple(b, c, e, params))
        da = hat_map(_x(n, a))
        op = op + (da * cc).scale(params.sqrt_monomial({(a, b): 1, (a, c): 1, (a, e): 1}))
        op = op - (cc * da).scale(params.sqrt_monomial({(b, a): 1, (c, a): 1, (e, a): 1}))
    return op


def annihilated_words(op, d, params):
    """(number of words in block d, number not sent to zero)."""
    words = word_basis(d)
    bad = sum(1 for w in words if operator_apply(op, FreePoly.word(params.n, w), params))
    return len(words), bad
