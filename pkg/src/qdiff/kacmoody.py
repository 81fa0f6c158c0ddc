"""Serre constants, Cartan data, root-vector towers and highest-root searches."""
import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .constants import find_constants, ideal_slice, normal_form, poly_vector, s_gram
from .freealg import FreePoly, word_basis, word_index
from .qstructure import (ConstraintError, Relation, apply_partial, mul_powers, param_from_constraints,
                         q_bracket, q_power, sigma_powers)
from .scalars import QT, as_fmpq, fmpq, q_binomial


def gen(n, i):
    return FreePoly.gen(n, i)


def proportional(p, r):
    """lambda with p = lambda * r (r nonzero), or None."""
    if not r:
        raise ValueError("reference must be nonzero")
    if not p:
        return 0
    w, c = next(iter(r.terms.items()))
    lam = p.coeff(w) / c if p.coeff(w) else None
    if lam is None or p != r.scale(lam):
        return None
    return lam


# ---------------------------------------------------------------- Serre constants and Cartan data

def serre_constant(i, j, k, params):
    """sum_m (-q_ij)^m q_ii^(m(m-1)/2) binom(k,m)_{q_ii} xi_i^m xi_j xi_i^(k-m)."""
    if i == j or k < 1:
        raise ValueError("need i != j and k >= 1")
    n = params.n
    qii, qij = params.Q[i][i], params.Q[i][j]
    out = FreePoly(n)
    for m in range(k + 1):
        c = (-qij) ** m * qii ** (m * (m - 1) // 2) * q_binomial(k, m, qii)
        out = out + FreePoly.word(n, (i,) * m + (j,) + (i,) * (k - m), c)
    return out


def serre_relation(i, j, k):
    """sigma_ij * q_ii^(k-1) = 1."""
    return Relation.make(mul_powers(sigma_powers(i, j), q_power(i, i, k - 1)), 1,
                         f"sigma({i},{j})*q[{i},{i}]^{k - 1} = 1")


@dataclass
class CartanData:
    n: int
    k: dict   # (i, j), i != j -> k_ij >= 1

    def __post_init__(self):
        for (i, j), v in self.k.items():
            if i == j or v < 1:
                raise ValueError(f"bad entry k[{i},{j}] = {v}")

    def matrix(self):
        return [[2 if i == j else 1 - self.k[(i, j)] for j in range(1, self.n + 1)]
                for i in range(1, self.n + 1)]

    def constraints(self):
        return [serre_relation(i, j, self.k[(i, j)])
                for i in range(1, self.n + 1) for j in range(1, self.n + 1) if i != j]

    @staticmethod
    def from_matrix(a):
        n = len(a)
        return CartanData(n, {(i + 1, j + 1): 1 - a[i][j]
                              for i in range(n) for j in range(n) if i != j})


def cartan_type(kind, rank):
    """Cartan data for A_l, B_2, B_3, C_l in the convention sigma_ij q_ii^(k_ij - 1) = 1."""
    k = {(i, j): 1 for i in range(1, rank + 1) for j in range(1, rank + 1) if i != j}
    for i in range(1, rank):
        k[(i, i + 1)] = k[(i + 1, i)] = 2
    if kind == "A":
        pass
    elif kind == "C":
        if rank < 2:
            raise ValueError("C_l needs l >= 2")
        k[(rank - 1, rank)] = 3
    elif kind == "B":
        if rank not in (2, 3):
            raise ValueError("only B_2 and B_3 are supported")
        k[(rank, rank - 1)] = 3
    else:
        raise ValueError(f"unknown type {kind}")
    return CartanData(rank, k)


def cartan_constraints(cd, seed=0, **kw):
    return param_from_constraints(cd.n, cd.constraints(), seed=seed, **kw)


def infer_cartan(params):
    """Solve sigma_ij = q_ii^(A_ij) in the exponent lattice; None on failure."""
    n = params.n
    a = [[2] * n for _ in range(n)]
    for i in range(1, n + 1):
        qd = params.Q[i][i].monomial_data() if hasattr(params.Q[i][i], "monomial_data") else None
        for j in range(1, n + 1):
            if i == j:
                continue
            s = params.sigma(i, j)
            sd = s.monomial_data() if hasattr(s, "monomial_data") else None
            if qd is None or sd is None:
                return None
            (cq, eq), (cs, es) = qd, sd
            if eq == 0:
                if es != 0:
                    return None
                found = [m for m in range(-3, 1) if cq ** m == cs]
                if not found:
                    return None
                a[i - 1][j - 1] = found[-1]
                continue
            if es % eq:
                return None
            m = es // eq
            if cq ** m != cs:
                return None
            a[i - 1][j - 1] = m
    if any(a[i][j] > 0 for i in range(n) for j in range(n) if i != j):
        return None
    return CartanData.from_matrix(a)


# ---------------------------------------------------------------- root-vector towers

def _prod(params, i, js):
    out = params.one
    for j in js:
        out = out * params.Q[i][j]
    return out


def letter(p, ell):
    """p-th entry of 1, 2, ..., l, l-1, ..., 1."""
    return p if p <= ell else 2 * ell - p


def path_product(params, i, length, ell):
    """q_{i,s_1} ... q_{i,s_length} along the sequence s = 1..l..1."""
    return _prod(params, i, [letter(p, ell) for p in range(1, length + 1)])


def a_coeff(n, params):
    """a_n = q_n1 ... q_{n,n-2} / q_{n-1,n}."""
    return _prod(params, n, range(1, n - 1)) / params.Q[n - 1][n]


def a_pair(i, n, params):
    """a(i, n) of the bracket relations [X^n, xi_i]_{a(i,n)} = delta_{i,n+1} X^{n+1}."""
    if i == n + 1:
        return a_coeff(n + 1, params)
    if i == n:
        return params.one if n == 1 else _prod(params, n, range(1, n))
    return _prod(params, i, range(1, n + 1))


def b_coeff(n, ell, params):
    """b_n: path product q_{l-n,1} ... q_{l-n,l} q_{l-n,l-1} ... q_{l-n,l-n}."""
    return path_product(params, ell - n, ell + n, ell)


def b_pair(m, n, ell, params):
    """b(m, n) of the vanishing brackets [X^{l+m-n}, xi_{l-m}]_{b(m,n)} = 0.

    Built from b(m,1) = b_m by the step b(m,n) = b(m,n-1) q_{s(l+m-n+1), l-m},
    which reproduces the path product q_{l-m,1} ... q_{l-m,l-m+n} whenever the
    path is defined (n <= m) and continues it beyond the turning point.
    """
    val = b_coeff(m, ell, params)
    for k in range(2, n + 1):
        val = val * params.Q[letter(ell + m - k + 1, ell)][ell - m]
    return val


def b_pair_literal(m, n, ell, params):
    """Path product q_{l-m,1} ... q_{l-m,l-m+n} (only defined for n <= m)."""
    if n > m:
        raise ValueError("path not defined beyond the turning point")
    return path_product(params, ell - m, ell + m - n, ell)


def c_pair(m, n, ell, params):
    """c(m, n): path product to l-m-n (n > 0) or to l-m+1 (n = 0)."""
    if n == 0:
        return path_product(params, ell - m, ell + m - 1, ell)
    return path_product(params, ell - m, ell + m + n, ell)


@dataclass
class RootVectorSeq:
    kind: str
    rank: int
    vectors: dict
    coefficients: dict = field(default_factory=dict)

    def __getitem__(self, n):
        return self.vectors[n]


def build_root_vectors_A(ell, params):
    if ell < 2 or params.n < ell:
        raise ValueError("need 2 <= l <= N")
    n = params.n
    xs = {0: FreePoly.scalar(n, params.one), 1: gen(n, 1)}
    coeffs = {}
    for k in range(2, ell + 1):
        coeffs[("a", k)] = a_coeff(k, params)
        xs[k] = q_bracket(xs[k - 1], gen(n, k), coeffs[("a", k)])
    return RootVectorSeq("A", ell, xs, coeffs)


def build_root_vectors_C(ell, params):
    seq = build_root_vectors_A(ell, params)
    n = params.n
    for k in range(1, ell):
        b = b_coeff(k, ell, params)
        seq.coefficients[("b", k)] = b
        seq.vectors[ell + k] = q_bracket(seq.vectors[ell + k - 1], gen(n, ell - k), b)
    seq.kind = "C"
    return seq


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    checks: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))

    def failures(self):
        return [c for c in self.checks if not c.ok]


def _eq_mod(a, b, params):
    return not normal_form(a - b, params)


def _check_derivatives(report, label, x, lower, target, params):
    """d_i x is a nonzero multiple of lower for i == target and zero otherwise (mod the ideal)."""
    for i in range(1, params.n + 1):
        dx = normal_form(apply_partial(i, x, params), params)
        if i == target:
            lam = proportional(dx, normal_form(lower, params))
            report.add(f"{label} d{i}", lam not in (None, 0), f"scalar {lam}")
        else:
            report.add(f"{label} d{i}", not dx, "" if not dx else str(dx))


def _check_constraints(params, cd):
    bad = [str(r) for r in cd.constraints() if not params.holds(r)]
    if bad:
        raise ConstraintError("parameters violate " + ", ".join(bad))


def verify_A(seq, params):
    ell, n = seq.rank, params.n
    _check_constraints(params, cartan_type("A", ell))
    rep = Report()
    X = seq.vectors
    for k in range(1, ell + 1):
        _check_derivatives(rep, f"lowering X^{k}", X[k], X[k - 1], k, params)
        for i in range(k + 2, ell + 1):
            br = q_bracket(X[k], gen(n, i), _prod(params, i, range(1, k + 1)))
            rep.add(f"vanishing [X^{k},x{i}]", not normal_form(br, params))
    for k in range(1, ell + 1):
        for i in range(1, ell + 1):
            br = q_bracket(X[k], gen(n, i), a_pair(i, k, params))
            want = X[k + 1] if i == k + 1 else FreePoly(n)
            rep.add(f"bracket n={k} i={i}", _eq_mod(br, want, params))
    return rep


def verify_C(seq, params):
    ell, n = seq.rank, params.n
    _check_constraints(params, cartan_type("C", ell))
    rep = Report()
    X = seq.vectors
    for k in range(1, ell + 1):
        _check_derivatives(rep, f"lowering X^{k}", X[k], X[k - 1], k, params)
    for k in range(1, ell):
        _check_derivatives(rep, f"lowering X^{ell + k}", X[ell + k], X[ell + k - 1], ell - k, params)
    for k in range(1, ell + 1):
        for i in range(1, ell + 1):
            if k == ell and i == ell - 1:
                continue
            br = q_bracket(X[k], gen(n, i), a_pair(i, k, params))
            want = X[k + 1] if i == k + 1 else FreePoly(n)
            rep.add(f"bracket n={k} i={i}", _eq_mod(br, want, params))
    exc = q_bracket(X[ell], gen(n, ell - 1), a_pair(ell - 1, ell, params))
    rep.add(f"bracket exception n={ell} i={ell - 1} is nonzero", bool(normal_form(exc, params)))
    for k in range(1, ell):
        br = q_bracket(X[ell + k - 1], gen(n, ell - k), b_coeff(k, ell, params))
        rep.add(f"raising n={k}", _eq_mod(br, X[ell + k], params))
    for m in range(0, ell):
        for k in range(2, 2 * m + 1):
            br = q_bracket(X[ell + m - k], gen(n, ell - m), b_pair(m, k, ell, params))
            rep.add(f"vanishing-b m={m} n={k}", not normal_form(br, params))
    for m in range(0, ell):
        for k in range(0, ell - m):
            br = q_bracket(X[ell + m + k], gen(n, ell - m), c_pair(m, k, ell, params))
            rep.add(f"vanishing-c m={m} n={k}", not normal_form(br, params))
    rep.add("c(0,0) = a(l,l)", c_pair(0, 0, ell, params) == a_pair(ell, ell, params))
    return rep


# ---------------------------------------------------------------- monomial grids

def monomial_grid(params, bound, signs=(1, -1)):
    """Distinct values +-prod(free q)^k, |k_v| <= bound, keyed by their t-monomial.

    Returns a list of (value, label) sorted by (exponent, sign); the label is a
    minimal-weight exponent vector producing the value.
    """
    names = sorted(params.free)
    best = {}
    for ks in itertools.product(range(-bound, bound + 1), repeat=len(names)):
        e = sum(params.free[v] * k for v, k in zip(names, ks))
        w = sum(abs(k) for k in ks)
        if e not in best or w < best[e][0]:
            best[e] = (w, ks)
    out = []
    for e in sorted(best):
        powers = {v: k for v, k in zip(names, best[e][1]) if k}
        for s in signs:
            out.append((QT.monomial(s, e), (s, powers)))
    return out


def grid_label(label):
    s, powers = label
    body = "*".join(f"q[{i},{j}]" + (f"^{k}" if k != 1 else "") for (i, j), k in sorted(powers.items()))
    body = body or "1"
    return ("-" if s < 0 else "") + body


# ---------------------------------------------------------------- polynomial interpolation in a scalar

def _interpolate(points, values):
    """Coefficients (low to high) of the polynomial through the points."""
    m = len(points)
    coeffs = [values[0] * 0 for _ in range(m)]
    for k in range(m):
        basis = [values[0] * 0 + 1]
        denom = values[0] * 0 + 1
        for j in range(m):
            if j == k:
                continue
            nb = [values[0] * 0 for _ in range(len(basis) + 1)]
            for d, c in enumerate(basis):
                nb[d + 1] = nb[d + 1] + c
                nb[d] = nb[d] - c * points[j]
            basis = nb
            denom = denom * (points[k] - points[j])
        f = values[k] / denom
        for d, c in enumerate(basis):
            coeffs[d] = coeffs[d] + c * f
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _poly_eval(coeffs, x):
    out = coeffs[-1] * 0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _divide_root(coeffs, r):
    """Synthetic division by (a - r)."""
    out = []
    acc = coeffs[-1] * 0
    for c in reversed(coeffs):
        acc = acc * r + c
        out.append(acc)
    rem = out.pop()
    return list(reversed(out)), rem


# ---------------------------------------------------------------- B2

def c2221_display(params):
    """(1/q12) x2^3 x1 - [3] x2^2 x1 x2 + [3] q12 q22 x2 x1 x2^2 - q12^2 q22^3 x1 x2^3."""
    Q = params.Q
    q3 = 1 + Q[2][2] + Q[2][2] ** 2
    n = params.n
    return FreePoly(n, {(2, 2, 2, 1): 1 / Q[1][2], (2, 2, 1, 2): -q3,
                        (2, 1, 2, 2): q3 * Q[1][2] * Q[2][2],
                        (1, 2, 2, 2): -(Q[1][2] ** 2) * Q[2][2] ** 3})


def b2_displayed_candidates(params):
    Q = params.Q
    n = params.n

    def e(c1, c2):
        return FreePoly(n, {(1, 2, 2): 1, (2, 1, 2): c1, (2, 2, 1): c2})
    q21, q22, q11 = Q[2][1], Q[2][2], Q[1][1]
    return [
        (e(-q21 * q22 * (1 + q22), q21 ** 2 * q22 ** 3), q21),
        (e(-q21 * (1 + q11), q21 ** 2 * q22 ** 2), q21 * q22),
        (e(-q21 * (1 + q22), q21 ** 2 * q22), q21 * q22 ** 2),
    ]


@dataclass
class B2Result:
    constant: object
    candidates: list          # (E, a2, label)
    survivors: list           # (E, a1, a2)
    char_poly: list
    complete: bool


def _normalize(p, word):
    c = p.coeff(word)
    return p.scale(1 / c) if c else p


def solve_b2(params, bound=4):
    """All (E, a2) with E xi_2 - a2 xi_2 E proportional to the (1,3) constant,
    then the a1 filter E xi_1 - a1 xi_1 E in the ideal."""
    _check_constraints(params, cartan_type("B", 2))
    n = params.n
    cons = find_constants((1, 3), params).basis
    if len(cons) != 1:
        raise RuntimeError(f"expected one constant in block (1,3), found {len(cons)}")
    c = cons[0]
    ewords = word_basis((1, 2))
    target = word_basis((1, 3))
    cvec = poly_vector(c, (1, 3))

    def system(a):
        cols = []
        for w in ewords:
            e = FreePoly.word(n, w)
            col = poly_vector(e * gen(n, 2) - (gen(n, 2) * e).scale(a), (1, 3))
            cols.append(col)
        cols.append({k: -v for k, v in cvec.items()})
        return [[cols[j].get(r, params.zero) for j in range(len(cols))] for r in range(len(target))]

    pts = [params.field(k) for k in range(4)]
    vals = [linalg.determinant(system(a)) for a in pts]
    poly = _interpolate(pts, vals)
    roots = []
    rest = poly
    for a, label in monomial_grid(params, bound):
        while len(rest) > 1 and not _poly_eval(rest, a):
            rest, _ = _divide_root(rest, a)
            roots.append((a, label))
    complete = len(rest) == 1
    candidates = []
    seen = set()
    for a, label in roots:
        if a in seen:
            continue
        seen.add(a)
        mat = system(a)
        ker = linalg.nullspace(linalg.sparse_rows(mat), len(ewords) + 1, params.one)
        for v in ker:
            if v.get(len(ewords)):
                e = FreePoly(n, {ewords[k]: x for k, x in v.items() if k < len(ewords)})
                candidates.append((_normalize(e, (1, 2, 2)), a, grid_label(label)))
    survivors = []
    sl = ideal_slice((2, 2), params)
    for e, a2, _ in candidates:
        u = linalg.reduce_vector(poly_vector(e * gen(n, 1), (2, 2)), sl.pivots, sl.rows)
        v = linalg.reduce_vector(poly_vector(gen(n, 1) * e, (2, 2)), sl.pivots, sl.rows)
        if not v:
            if not u:
                survivors.append((e, None, a2))
            continue
        k0 = next(iter(v))
        a1 = u.get(k0, 0) / v[k0]
        if all(u.get(k, 0) == a1 * v.get(k, 0) for k in set(u) | set(v)):
            survivors.append((e, a1, a2))
    return B2Result(c, candidates, survivors, poly, complete)


# ---------------------------------------------------------------- highest-root searches

def lie_generators(kind):
    """Simple root matrices and the target highest-root matrix."""
    if kind == "B3":
        size, pairs = 7, [((1, 2), (6, 7)), ((2, 3), (5, 6)), ((3, 4), (4, 5))]
        word = (1, 2, 3, 3, 2)
    elif kind == "B2":
        size, pairs = 5, [((1, 2), (4, 5)), ((2, 3), (3, 4))]
        word = (1, 2, 2)
    else:
        raise ValueError(kind)
    gens = {}
    for i, ((a, b), (c, d)) in enumerate(pairs, 1):
        m = np.zeros((size, size), dtype=object)
        m[a - 1, b - 1] += 1
        m[c - 1, d - 1] -= 1
        gens[i] = m
    top = gens[word[0]]
    for i in word[1:]:
        top = top.dot(gens[i]) - gens[i].dot(top)
    return gens, top


def word_matrix(w, gens):
    m = None
    for i in w:
        m = gens[i] if m is None else m.dot(gens[i])
    return m


def limit_space(vectors, ncols):
    """Row space of the t -> 1 limits of a Q(t)-subspace.

    Input rows must be regular at t = 1. Whenever the values at t = 1 are
    dependent, the corresponding combination vanishes there and is divided by
    (t - 1); this terminates because the rows stay independent over Q(t).
    """
    rows = [dict(v) for v in vectors if v]
    t1 = QT.t - 1
    while True:
        vals = [{c: x.evaluate(1) for c, x in r.items() if x.evaluate(1)} for r in rows]
        m = len(rows)
        aug = []
        for k, r in enumerate(vals):
            a = dict(r)
            a[ncols + k] = fmpq(1)
            aug.append(a)
        piv, red = linalg.echelon(aug, ncols + m, reduced=True)
        rel = next((r for p, r in zip(piv, red) if p >= ncols), None)
        if rel is None:
            return vals
        coeffs = {c - ncols: v for c, v in rel.items() if c >= ncols}
        k0 = max(coeffs)
        comb = {}
        for k, c in coeffs.items():
            for col, x in rows[k].items():
                s = comb.get(col)
                comb[col] = x * c if s is None else s + x * c
        rows[k0] = {col: x / t1 for col, x in comb.items() if x}


def _regularize(vec):
    """Scale a Q(t) vector so its minimal valuation at t = 1 is zero."""
    m = min(x.valuation_at(1) for x in vec.values())
    f = (QT.t - 1) ** (-m) if m else None
    return {c: x * f for c, x in vec.items()} if f is not None else dict(vec)


@dataclass
class SearchResult:
    kind: str
    bound: int
    candidates: dict            # i -> list of (a, label) surviving the prefilter
    exact: dict                 # i -> list of (a, label, kernel_dim)
    solutions: list             # (labels, dim, qualifies)
    qualifying: list
    notes: list


def _gram_rows_for(i, d, params, a):
    """Rows of S_{d+e_i} . (E -> E xi_i - a xi_i E) on word_basis(d)."""
    dd = tuple(x + (1 if k == i - 1 else 0) for k, x in enumerate(d))
    g = s_gram(dd, params).matrix
    idx = word_index(dd)
    words = word_basis(d)
    colr = [idx[w + (i,)] for w in words]
    coll = [idx[(i,) + w] for w in words]
    rows = []
    for r in range(len(g)):
        row = {}
        gr = g[r]
        for k in range(len(words)):
            v = gr[colr[k]] - a * gr[coll[k]]
            if v:
                row[k] = v
        rows.append(row)
    return rows


def _modp_rank_deficit(i, d, params, a, p, t0):
    """Corank mod p of the specialized system on block d."""
    dd = tuple(x + (1 if k == i - 1 else 0) for k, x in enumerate(d))
    key = ("gram-modp", dd, p, t0)
    gm = params._cache.get(key)
    if gm is None:
        g = s_gram(dd, params).matrix
        gm = np.array([[linalg.modp_value(x, p, t0) if x else 0 for x in row] for row in g], dtype=np.int64)
        params._cache[key] = gm
    idx = word_index(dd)
    words = word_basis(d)
    colr = [idx[w + (i,)] for w in words]
    coll = [idx[(i,) + w] for w in words]
    am = linalg.modp_value(a, p, t0)
    mat = (gm[:, colr] - am * gm[:, coll]) % p
    return len(words) - _rank_np(mat, p)


def _rank_np(mat, p):
    m = mat.copy() % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        f = m[:, c].copy()
        f[r] = 0
        nzr = np.nonzero(f)[0]
        if len(nzr):
            m[nzr] = (m[nzr] - (f[nzr, None] * m[r]) % p) % p
        r += 1
        if r == rows:
            break
    return r


def highest_root_search(kind, params, bound=6, prime=2147483629, seed=1):
    """Grid search for E in the quotient block with [E, xi_i]_{a_i} in the ideal."""
    d = {"B3": (1, 2, 2), "B2": (1, 2)}[kind]
    return _search(kind, d, params, bound, prime, seed)


def _search(kind, d, params, bound, prime, seed):
    n = params.n
    rng = random.Random(seed)
    t0 = rng.randrange(2, prime - 1)
    notes = [f"grid: +-prod(free q)^k with |k| <= {bound}; prefilter mod p={prime} at t={t0}"]
    base = ideal_slice(d, params).dim
    words = word_basis(d)
    grid = monomial_grid(params, bound)
    notes.append(f"{len(grid)} distinct scalar values per generator")
    cands, exact = {}, {}
    for i in range(1, n + 1):
        keep = []
        for a, label in grid:
            try:
                deficit = _modp_rank_deficit(i, d, params, a, prime, t0)
            except ZeroDivisionError:
                deficit = len(words)
            if deficit > base:
                keep.append((a, label))
        cands[i] = keep
        ex = []
        for a, label in keep:
            ker = linalg.nullspace(_gram_rows_for(i, d, params, a), len(words), params.one)
            if len(ker) > base:
                ex.append((a, label, ker))
        exact[i] = ex
    solutions, qualifying = [], []
    gens, top = lie_generators(kind)
    for combo in itertools.product(*[exact[i] for i in range(1, n + 1)]):
        rows = []
        for i, (a, label, ker) in enumerate(combo, 1):
            rows.extend(_gram_rows_for(i, d, params, a))
        ker = linalg.nullspace(rows, len(words), params.one)
        if len(ker) <= base:
            continue
        labels = tuple(grid_label(lab) for _, lab, _ in combo)
        q = _qualifies(ker, words, gens, top)
        solutions.append((labels, len(ker) - base, q, ker))
        if q:
            qualifying.append((labels, [a for a, _, _ in combo], ker))
    notes.append("completeness is limited to the grid; scalars outside it are not searched")
    return SearchResult(kind, bound, {i: [(a, grid_label(l)) for a, l in v] for i, v in cands.items()},
                        {i: [(a, grid_label(l), len(k)) for a, l, k in v] for i, v in exact.items()},
                        [(lab, dim, q) for lab, dim, q, _ in solutions], qualifying, notes)


def _qualifies(ker, words, gens, top):
    lim = limit_space([_regularize(v) for v in ker], len(words))
    mats = []
    for v in lim:
        m = None
        for k, c in v.items():
            term = word_matrix(words[k], gens) * c
            m = term if m is None else m + term
        if m is not None:
            mats.append(m)
    if not mats:
        return False
    size = top.shape[0] * top.shape[1]
    rows = [{k: as_fmpq(x) for k, x in enumerate(m.flatten()) if x} for m in mats]
    piv, red = linalg.echelon(rows, size, reduced=True)
    target = {k: as_fmpq(x) for k, x in enumerate(top.flatten()) if x}
    return linalg.in_span(target, piv, red)


def zero_scalar_control(params, d=(1, 2, 2)):
    """With every a_i = 0 only ideal elements E satisfy E xi_i in the ideal."""
    base = ideal_slice(d, params).dim
    rows = []
    for i in range(1, params.n + 1):
        rows.extend(_gram_rows_for(i, d, params, params.zero))
    return len(linalg.nullspace(rows, len(word_basis(d)), params.one)) == base


def search_b3(params, exponent_bound=6, prime=2147483629, seed=1):
    _check_constraints(params, cartan_type("B", 3))
    return _search("B3", (1, 2, 2), params, exponent_bound, prime, seed)


def search_b2_control(params, exponent_bound=4, prime=2147483629, seed=1):
    _check_constraints(params, cartan_type("B", 2))
    return _search("B2", (1, 2), params, exponent_bound, prime, seed)
