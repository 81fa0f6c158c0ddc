"""Taylor coefficients, gradient equations, constant pairings and
bounded-degree Hochschild kernels."""
import random
from dataclasses import dataclass, field

from . import linalg
from .constants import find_constants, irreducible_constants, quotient_basis, s_gram
from .freealg import (FreePoly, degrees_below, degrees_of_total, multidegree, sub_degree,
                      word_basis, word_index)
from .qstructure import (apply_dword, apply_partial, hat_map, operator_apply,
                         stacked_derivations)


class TaylorError(RuntimeError):
    pass


# ---------------------------------------------------------------- Taylor coefficients

@dataclass
class TaylorCoefficients:
    n: int
    max_degree: int
    table: dict
    gauge_log: list = field(default_factory=list)

    def __getitem__(self, idx):
        return self.table.get(tuple(idx), FreePoly(self.n))


def _lead_factor(k, rest, Q):
    c = 1
    for a in rest:
        c = Q[k][a] * c
    return c


class _BlockSolver:
    """Reusable solver for the stacked system d_k x = y_k on a block."""

    def __init__(self, d, params):
        self.d = d
        self.params = params
        self.rows = stacked_derivations(d, params)
        self.ncols = len(word_basis(d))
        offsets, off = {}, 0
        for i in range(1, params.n + 1):
            offsets[i] = off
            low = sub_degree(d, i)
            off += len(word_basis(low)) if low is not None else 0
        self.offsets = offsets
        nrows = len(self.rows)
        aug = []
        for i, r in enumerate(self.rows):
            a = dict(r)
            a[self.ncols + i] = 1
            aug.append(a)
        self.pivots, self.red = linalg.echelon(aug, self.ncols + nrows, reduced=True)

    def rhs_vector(self, ys):
        out = {}
        for i, y in ys.items():
            low = sub_degree(self.d, i)
            if low is None:
                if y:
                    raise ValueError("component of impossible multidegree")
                continue
            idx = word_index(low)
            for w, c in y.terms.items():
                k = idx.get(w)
                if k is None:
                    raise ValueError(f"y_{i} has a term {w} outside block {low}")
                out[self.offsets[i] + k] = c
        return out

    def solve(self, ys):
        rhs = self.rhs_vector(ys)
        x = {}
        for p, r in zip(self.pivots, self.red):
            val = 0
            for c, v in r.items():
                if c >= self.ncols:
                    t = rhs.get(c - self.ncols)
                    if t:
                        val = val + v * t
            if p >= self.ncols:
                if val:
                    return None
                continue
            if val:
                x[p] = val
        words = word_basis(self.d)
        return FreePoly._raw(self.params.n, {words[k]: v for k, v in x.items()})


def _block_solver(d, params):
    key = ("blocksolver", d)
    s = params._cache.get(key)
    if s is None:
        s = _BlockSolver(d, params)
        params._cache[key] = s
    return s


def taylor_coefficients(params, max_degree):
    """Particular solution of the Taylor recursion up to max_degree.

    Gauge: only A^I with I a representative (quotient) word is nonzero, and
    each A^I is the solution of its gradient system with free variables zero.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    n = params.n
    Q = params.Q
    table = {(): FreePoly.scalar(n, -params.one)}
    log = []
    for total in range(1, max_degree + 1):
        for d in degrees_of_total(n, total):
            words = word_basis(d)
            qb = quotient_basis(d, params)
            if len(qb.words) < len(words):
                log.append(f"block {d}: A^I set to zero on {len(words) - len(qb.words)} ideal words")
            if not qb.words:
                continue
            g = s_gram(d, params).matrix
            idx = word_index(d)
            sel = [idx[w] for w in qb.words]
            ginv = linalg.inverse([[g[a][b] for b in sel] for a in sel])
            rhs = {w: {} for w in qb.words}
            for k in range(1, n + 1):
                low = sub_degree(d, k)
                if low is None:
                    continue
                # R_k[y] = -sum_I' c(k,I') A^I' S[(k,I')][y], y over representative words
                rk = [FreePoly(n) for _ in sel]
                for ip in word_basis(low):
                    a = table.get(ip)
                    if not a:
                        continue
                    c = _lead_factor(k, ip, Q)
                    grow = g[idx[(k,) + ip]]
                    for col, s in enumerate(sel):
                        v = grow[s]
                        if v:
                            rk[col] = rk[col] - a.scale(c * v)
                for j, w in enumerate(qb.words):
                    acc = FreePoly(n)
                    for col in range(len(sel)):
                        v = ginv[col][j]
                        if v and rk[col]:
                            acc = acc + rk[col].scale(v)
                    rhs[w][k] = acc
            solver = _block_solver(d, params)
            free = solver.ncols - sum(1 for p in solver.pivots if p < solver.ncols)
            if free:
                log.append(f"block {d}: {free} free constant direction(s) set to zero")
            for w in qb.words:
                a = solver.solve(rhs[w])
                if a is None:
                    raise TaylorError(f"Taylor recursion inconsistent at A^{w}")
                if a:
                    table[w] = a
    return TaylorCoefficients(n, max_degree, table, log)


def taylor_residual_ok(coeffs, params, max_word_degree=None):
    """Check the recursion as an operator identity on all words up to the bound."""
    n = params.n
    Q = params.Q
    bound = coeffs.max_degree if max_word_degree is None else max_word_degree
    for total in range(0, bound + 1):
        for d in degrees_of_total(n, total):
            for y in word_basis(d):
                yp = FreePoly(n, {y: 1})
                for k in range(1, n + 1):
                    acc = FreePoly(n)
                    for sub in degrees_below(d):
                        for w in word_basis(sub):
                            if not w:
                                continue
                            dy = apply_dword(w, yp, params)
                            if not dy:
                                continue
                            coef = apply_partial(k, coeffs[w], params)
                            if w[0] == k:
                                coef = coef + coeffs[w[1:]].scale(_lead_factor(k, w[1:], Q))
                            acc = acc + coef * dy
                    if acc:
                        return False
    return True


def taylor_closed_form(word, params):
    """(-1)^(n+1) prod_{k<l} q_{i_k i_l} * sum_J T[rev(I)][J] xi_J at generic points."""
    from .constants import t_gram
    n = params.n
    d = multidegree(word, n)
    words, t = t_gram(d, params)
    row = t[words.index(tuple(reversed(word)))]
    c = params.one
    for a in range(len(word)):
        for b in range(a + 1, len(word)):
            c = c * params.Q[word[a]][word[b]]
    if len(word) % 2 == 0:
        c = -c
    return FreePoly(n, {w: c * v for w, v in zip(words, row) if v})


def single_generator_coefficient(n, params, i=1):
    """(-1)^(n-1) q^(n choose 2) / [n]_q! xi_i^n with q = q_ii (needs [n]_q! != 0)."""
    from .scalars import q_factorial
    q = params.Q[i][i]
    fact = q_factorial(n, q)
    if not fact:
        raise ZeroDivisionError(f"[{n}]! vanishes")
    c = q ** (n * (n - 1) // 2) / fact
    if n % 2 == 0:
        c = -c
    return FreePoly(params.n, {(i,) * n: c})


@dataclass
class Reconstruction:
    constant_term: object
    ok: bool


def taylor_reconstruct(x, params, coeffs):
    """c(x) = x - sum_{|I|>=1} A^I d_I x, with d_i c(x) = 0 checked exactly."""
    if x.degree() > coeffs.max_degree:
        raise ValueError("x has degree above the computed coefficients")
    acc = FreePoly(x.n)
    for w, a in coeffs.table.items():
        if not w:
            continue
        dx = apply_dword(w, x, params)
        if dx:
            acc = acc + a * dx
    c = x - acc
    ok = all(not apply_partial(i, c, params) for i in range(1, params.n + 1))
    return Reconstruction(c, ok)


# ---------------------------------------------------------------- gradients and pairings

@dataclass
class OneForm:
    components: tuple

    @staticmethod
    def of(*ys):
        return OneForm(tuple(ys))

    def __getitem__(self, i):
        return self.components[i - 1]

    @property
    def n(self):
        return len(self.components)


def exact_form(x, params):
    return OneForm(tuple(apply_partial(i, x, params) for i in range(1, params.n + 1)))


def infer_degree(y):
    for i, c in enumerate(y.components, 1):
        if c:
            dd = list(c.multidegree())
            dd[i - 1] += 1
            return tuple(dd)
    return None


def constant_pairing(c, y, params):
    """C(y): replace the rightmost derivative of hat(C) by the component y."""
    from .constants import is_constant, NotAConstant
    if not is_constant(c, params):
        raise NotAConstant("pairing needs a constant")
    out = FreePoly(params.n)
    for w, v in c.terms.items():
        comp = y[w[-1]]
        if comp:
            out = out + apply_dword(w[:-1], comp, params).scale(v)
    return out


@dataclass
class GradientResult:
    solution: object = None
    unique: bool = False
    obstructions: list = field(default_factory=list)

    @property
    def ok(self):
        return self.solution is not None


def solve_gradient(y, d, params):
    """Solve d_i x = y_i on block d; report violated constant pairings otherwise."""
    d = tuple(d)
    solver = _block_solver(d, params)
    x = solver.solve({i: y[i] for i in range(1, params.n + 1)})
    if x is not None:
        unique = not find_constants(d, params).basis
        return GradientResult(x, unique)
    obs = []
    for e in degrees_below(d):
        if sum(e) < 2:
            continue
        for c in irreducible_constants(e, params):
            val = constant_pairing(c, y, params)
            if val:
                obs.append((c, val))
    if not obs:
        raise TaylorError("inconsistent gradient system without a violated constant")
    return GradientResult(None, False, obs)


def _relevant_constants(d, params, irreducible, max_total=None):
    out = []
    for e in degrees_below(d):
        t = sum(e)
        if t < 2 or (max_total is not None and t > max_total):
            continue
        cs = irreducible_constants(e, params) if irreducible else find_constants(e, params).basis
        out.extend(cs)
    return out


def is_closed(y, params, d=None):
    d = d or infer_degree(y)
    if d is None:
        return True, []
    bad = [(c, v) for c in _relevant_constants(d, params, False, max_total=2)
           if (v := constant_pairing(c, y, params))]
    return not bad, bad


def is_strongly_closed(y, params, d=None):
    d = d or infer_degree(y)
    if d is None:
        return True, []
    bad = [(c, v) for c in _relevant_constants(d, params, True)
           if (v := constant_pairing(c, y, params))]
    return not bad, bad


# ---------------------------------------------------------------- Hochschild kernels

class Chain:
    """Formal sum of tensors w_1 (x) ... (x) w_p of nonempty words."""

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        for t, c in (terms or {}).items():
            t = tuple(tuple(w) for w in t)
            if any(len(w) == 0 for w in t):
                raise ValueError("tensor factors must have degree >= 1")
            if c:
                s = self.terms.get(t)
                s = c if s is None else s + c
                if s:
                    self.terms[t] = s
                else:
                    self.terms.pop(t, None)

    @staticmethod
    def tensor(*polys):
        """Expand a tensor of polynomials multilinearly."""
        n = polys[0].n
        acc = {(): 1}
        for p in polys:
            if p.projection_0():
                raise ValueError("tensor factors must have degree >= 1")
            nxt = {}
            for t, c in acc.items():
                for w, v in p.terms.items():
                    key = t + (w,)
                    nxt[key] = nxt.get(key, 0) + c * v
            acc = nxt
        return Chain(n, acc)

    def __add__(self, other):
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out[t] + c if t in out else c
        return Chain(self.n, out)

    def scale(self, c):
        return Chain(self.n, {t: c * v for t, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Chain) and self.terms == other.terms


def hochschild_boundary(c):
    """sum_{i=1}^{p-1} (-1)^(i+1) (..., a_i a_{i+1}, ...)."""
    out = {}
    for t, v in c.terms.items():
        p = len(t)
        for i in range(p - 1):
            merged = t[:i] + (t[i] + t[i + 1],) + t[i + 2:]
            s = v if i % 2 == 0 else -v
            out[merged] = out[merged] + s if merged in out else s
    return Chain(c.n, out)


class RandomCochain:
    """Seeded cochain on basis tensors; values keep total multidegree."""

    def __init__(self, n, params, seed=0, density=3, coeff_range=5):
        self.n = n
        self.params = params
        self.seed = seed
        self.density = density
        self.coeff_range = coeff_range
        self._memo = {}

    def value(self, t):
        hit = self._memo.get(t)
        if hit is None:
            rng = random.Random(hash((self.seed, t)) & 0xFFFFFFFF)
            d = multidegree(tuple(a for w in t for a in w), self.n)
            words = word_basis(d)
            picks = rng.sample(list(words), min(self.density, len(words)))
            hit = FreePoly(self.n, {w: self.params.field(rng.randint(-self.coeff_range, self.coeff_range))
                                    for w in picks})
            self._memo[t] = hit
        return hit

    def __call__(self, chain):
        out = FreePoly(self.n)
        for t, c in chain.terms.items():
            out = out + self.value(t).scale(c)
        return out


def pi_action(a, x, params):
    """pi(a) x with pi(xi_i) = d_i."""
    return operator_apply(hat_map(a), x, params)


class Coboundary:
    """d tau (a_1 (x) ... (x) a_p) = pi(a_1) tau(a_2 ...) - tau(boundary a)."""

    def __init__(self, tau, params):
        self.tau = tau
        self.params = params

    def value(self, t):
        n = self.params.n
        head = FreePoly(n, {t[0]: 1})
        rest = Chain(n, {t[1:]: 1}) if len(t) > 1 else None
        first = pi_action(head, self.tau(rest), self.params) if rest else FreePoly(n)
        return first - self.tau(hochschild_boundary(Chain(n, {t: 1})))

    def __call__(self, chain):
        out = FreePoly(self.params.n)
        for t, c in chain.terms.items():
            out = out + self.value(t).scale(c)
        return out


def hochschild_coboundary(tau, a, params):
    return Coboundary(tau, params)(a)


# ---------------------------------------------------------------- p-forms on generators

@dataclass
class PForm:
    arity: int
    values: dict

    def __call__(self, idx):
        return self.values.get(tuple(idx))


def serre_cochain_d(z, a, params, max_arity=2):
    """dz(a) = sum pi(a_0) z(a_1 ... a_p) on a closed chain with generator tails."""
    if z.arity > max_arity:
        raise ValueError(f"arity {z.arity} above bound {max_arity}")
    if hochschild_boundary(a):
        raise ValueError("chain is not closed")
    n = params.n
    out = FreePoly(n)
    for t, c in a.terms.items():
        if len(t) != z.arity + 1 or any(len(w) != 1 for w in t[1:]):
            raise ValueError("tail entries must be single generators")
        val = z(tuple(w[0] for w in t[1:]))
        if val:
            out = out + pi_action(FreePoly(n, {t[0]: 1}), val, params).scale(c)
    return out


def pform_is_strongly_closed(z, params, degree_bound=3):
    """For every irreducible constant C with |C| <= bound and every tail j,
    sum C^w d_{w_1..w_(k-1)} z(w_k, j...) vanishes."""
    n = params.n
    import itertools
    tails = list(itertools.product(range(1, n + 1), repeat=z.arity - 1))
    witnesses = []
    for total in range(2, degree_bound + 1):
        for e in degrees_of_total(n, total):
            for c in irreducible_constants(e, params):
                for tail in tails:
                    acc = FreePoly(n)
                    for w, v in c.terms.items():
                        val = z((w[-1],) + tail)
                        if val:
                            acc = acc + apply_dword(w[:-1], val, params).scale(v)
                    if acc:
                        witnesses.append((c, tail, acc))
    return not witnesses, witnesses
