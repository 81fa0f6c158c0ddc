"""Constants, the Gram matrix of the form S, ideal slices, quotients and T."""
import itertools
from dataclasses import dataclass, field

from . import linalg
from .freealg import (FreePoly, degrees_below, multidegree, sub_degree,
                      word_basis, word_index)
from .qstructure import apply_partial, derivation_matrix, stacked_derivations


class ConsistencyError(RuntimeError):
    pass


class NotAConstant(ValueError):
    pass


@dataclass
class ConstantBasis:
    multidegree: tuple
    basis: list
    right: bool = False

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)


@dataclass
class SGram:
    multidegree: tuple
    words: tuple
    matrix: list


@dataclass
class IdealSlice:
    multidegree: tuple
    basis: list
    pivots: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def dim(self):
        return len(self.basis)


@dataclass
class QuotientBasis:
    multidegree: tuple
    words: list
    slice: IdealSlice

    @property
    def dim(self):
        return len(self.words)

    def normal_form(self, p):
        return normal_form_in(self.slice, p)


def _rows_to_polys(n, d, rows):
    words = word_basis(d)
    return [FreePoly._raw(n, {words[c]: v for c, v in r.items()}) for r in rows]


def poly_vector(p, d):
    idx = word_index(tuple(d))
    out = {}
    for w, c in p.terms.items():
        k = idx.get(w)
        if k is None:
            raise ValueError(f"word {w} not of multidegree {d}")
        out[k] = c
    return out


def _norm(d, params):
    d = tuple(d)
    if len(d) != params.n:
        raise ValueError(f"multidegree {d} has wrong length for N={params.n}")
    return d


# ---------------------------------------------------------------- constants

def find_constants(d, params, right=False):
    """Canonical (RREF) basis of the common kernel of all derivations on block d."""
    d = _norm(d, params)
    key = ("constants", d, right)
    hit = params._cache.get(key)
    if hit is not None:
        return hit
    if sum(d) == 0:
        raise ValueError("constants live in positive degree")
    rows = stacked_derivations(d, params, right)
    ker = linalg.nullspace(rows, len(word_basis(d)), params.one)
    out = ConstantBasis(d, _rows_to_polys(params.n, d, ker), right)
    params._cache[key] = out
    return out


def is_constant(p, params):
    return all(not apply_partial(i, p, params) for i in range(1, params.n + 1)) and bool(p)


# ---------------------------------------------------------------- the form S

def s_gram(d, params):
    """Gram matrix S[x][y] = ((hat x) y)_0 on word_basis(d)."""
    d = _norm(d, params)
    key = ("gram", d)
    hit = params._cache.get(key)
    if hit is not None:
        return hit
    words = word_basis(d)
    zero, one = params.zero, params.one
    if sum(d) == 0:
        out = SGram(d, words, [[one]])
        params._cache[key] = out
        return out
    m = len(words)
    mat = []
    for w in words:
        i = w[-1]
        lower = sub_degree(d, i)
        g_low = s_gram(lower, params).matrix
        row_low = g_low[word_index(lower)[w[:-1]]]
        dmat = derivation_matrix(i, d, params)
        acc = {}
        for z, g in enumerate(row_low):
            if not g:
                continue
            for y, v in dmat[z].items():
                s = acc.get(y)
                acc[y] = g * v if s is None else s + g * v
        mat.append([acc.get(y, zero) or zero for y in range(m)])
    out = SGram(d, words, mat)
    params._cache[key] = out
    return out


def s_form(x, y, params):
    """S(x, y) for homogeneous x, y of equal multidegree (0 otherwise)."""
    total = params.zero
    for d in set(x.multidegrees()) & set(y.multidegrees()):
        g = s_gram(d, params).matrix
        vx, vy = poly_vector(x.component(d), d), poly_vector(y.component(d), d)
        for a, ca in vx.items():
            for b, cb in vy.items():
                if g[a][b]:
                    total = total + ca * cb * g[a][b]
    return total


def gram_radical(d, params):
    g = s_gram(d, params).matrix
    return linalg.nullspace(linalg.sparse_rows(g), len(g), params.one)


# ---------------------------------------------------------------- ideal slices

def ideal_slice(d, params, cross_check=False):
    d = _norm(d, params)
    key = ("slice", d)
    sl = params._cache.get(key)
    if sl is None:
        m = len(word_basis(d))
        if sum(d) == 0:
            sl = IdealSlice(d, [], [], [])
        else:
            rad = gram_radical(d, params)
            pivots, rows = linalg.echelon(rad, m, reduced=True)
            sl = IdealSlice(d, _rows_to_polys(params.n, d, rows), pivots, rows)
        params._cache[key] = sl
    if cross_check:
        gen = generated_slice(d, params)
        if gen.pivots != sl.pivots or any(a != b for a, b in zip(gen.rows, sl.rows)):
            raise ConsistencyError(f"radical of S differs from the constant-generated slice at {d}")
    return sl


def _products_into(d, c, params, out_rows):
    """Vectors u*c*v of multidegree d for all words u, v."""
    e = c.multidegree()
    rest = tuple(a - b for a, b in zip(d, e))
    if min(rest) < 0:
        return
    idx = word_index(d)
    for du in degrees_below(rest):
        dv = tuple(a - b for a, b in zip(rest, du))
        for u in word_basis(du):
            for v in word_basis(dv):
                row = {}
                for w, x in c.terms.items():
                    row[idx[u + w + v]] = x
                out_rows.append(row)


def generated_slice(d, params, strict=False, right=False):
    """Span of u*C*v over constants C of multidegree <= d (< d when strict)."""
    d = _norm(d, params)
    key = ("gen-slice", d, strict, right)
    hit = params._cache.get(key)
    if hit is not None:
        return hit
    m = len(word_basis(d))
    rows = []
    for e in degrees_below(d):
        if sum(e) == 0 or (strict and e == d):
            continue
        for c in find_constants(e, params, right).basis:
            _products_into(d, c, params, rows)
    pivots, red = linalg.echelon(rows, m, reduced=True)
    out = IdealSlice(d, _rows_to_polys(params.n, d, red), pivots, red)
    params._cache[key] = out
    return out


def normal_form_in(sl, p):
    d = sl.multidegree
    out = FreePoly(p.n)
    for e in p.multidegrees():
        comp = p.component(e)
        if e == d:
            vec = linalg.reduce_vector(poly_vector(comp, d), sl.pivots, sl.rows)
            words = word_basis(d)
            comp = FreePoly._raw(p.n, {words[k]: v for k, v in vec.items()})
        out = out + comp
    return out


def quotient_basis(d, params):
    sl = ideal_slice(d, params)
    piv = set(sl.pivots)
    words = [w for k, w in enumerate(word_basis(sl.multidegree)) if k not in piv]
    return QuotientBasis(sl.multidegree, words, sl)


def normal_form(p, params):
    """Reduce every homogeneous component modulo its ideal slice."""
    out = FreePoly(p.n)
    for e in p.multidegrees():
        comp = p.component(e)
        if sum(e):
            comp = normal_form_in(ideal_slice(e, params), comp)
        out = out + comp
    return out


def t_gram(d, params):
    """Inverse of S on the quotient coordinates.

    Returns (words, matrix) indexed by the representative words; at generic
    points these are all words of the block and T is the full inverse.
    """
    qb = quotient_basis(d, params)
    g = s_gram(d, params).matrix
    idx = word_index(tuple(d))
    sel = [idx[w] for w in qb.words]
    if not sel:
        return [], []
    sub = [[g[a][b] for b in sel] for a in sel]
    return qb.words, linalg.inverse(sub)


# ---------------------------------------------------------------- irreducibility and extension

def is_irreducible_constant(c, params):
    if not is_constant(c, params):
        raise NotAConstant("input is not a constant")
    d = c.multidegree()
    low = generated_slice(d, params, strict=True)
    return not linalg.in_span(poly_vector(c, d), low.pivots, low.rows)


def irreducible_constants(d, params):
    """A basis of constants in block d completing the lower-generated slice."""
    d = _norm(d, params)
    low = generated_slice(d, params, strict=True)
    pivots, rows = list(low.pivots), [dict(r) for r in low.rows]
    out = []
    for c in find_constants(d, params).basis:
        vec = poly_vector(c, d)
        rem = linalg.reduce_vector(vec, pivots, rows)
        if rem:
            out.append(c)
            pivots, rows = linalg.echelon(rows + [vec], len(word_basis(d)), reduced=True)
    return out


@dataclass
class Extension:
    constant: object
    obstruction: str = ""
    coefficients: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.obstruction


def extend_constant(c, x, params):
    """Look for a constant C*x + sum lambda_(u,v) u*C*v with u a nonempty word."""
    if not is_constant(c, params):
        raise NotAConstant("input is not a constant")
    n = params.n
    x = tuple(x)
    base = c * FreePoly.word(n, x)
    if not x:
        return Extension(c)
    dx = multidegree(x, n)
    terms = []
    for du in degrees_below(dx):
        if sum(du) == 0:
            continue
        dv = tuple(a - b for a, b in zip(dx, du))
        for u in word_basis(du):
            for v in word_basis(dv):
                terms.append(((u, v), FreePoly.word(n, u) * c * FreePoly.word(n, v)))
    # columns: unknowns; rows: coefficients of all derivatives
    rows_by_key = {}
    rhs = {}

    def put(col, poly, target):
        for i in range(1, n + 1):
            for w, v in apply_partial(i, poly, params).terms.items():
                r = rows_by_key.setdefault((i, w), len(rows_by_key))
                target(r, col, v)

    mat = {}
    put(None, base, lambda r, col, v: rhs.__setitem__(r, rhs.get(r, 0) - v))
    for k, (_, t) in enumerate(terms):
        put(k, t, lambda r, col, v: mat.setdefault(r, {}).__setitem__(col, v))
    rows = [mat.get(r, {}) for r in range(len(rows_by_key))]
    sol, witness = linalg.solve(rows, len(terms), {r: v for r, v in rhs.items() if v})
    if sol is None:
        return Extension(None, "inconsistent linear system: no constant of this form")
    cand = base
    for k, v in sol.items():
        cand = cand + terms[k][1].scale(v)
    if not cand:
        for kv in linalg.nullspace(rows, len(terms), params.one):
            trial = cand
            for k, v in kv.items():
                trial = trial + terms[k][1].scale(v)
            if trial:
                cand = trial
                break
    if not cand:
        return Extension(None, "every solution of the ansatz is zero")
    return Extension(cand, "", {terms[k][0]: v for k, v in sol.items()})


# ---------------------------------------------------------------- checks used by tests and CLI

def kernel_consistency(d, params):
    """Constants in d, rank drop of the stacked derivations, and S singular on d."""
    m = len(word_basis(d))
    rk = linalg.rank(stacked_derivations(d, params), m)
    sl = ideal_slice(d, params)
    return {
        "constants": len(find_constants(d, params)),
        "stacked_rank_drop": m - rk,
        "gram_corank": sl.dim,
    }


def blocks_up_to(n, max_total):
    for total in range(1, max_total + 1):
        for d in itertools.product(range(total + 1), repeat=n):
            if sum(d) == total:
                yield d
