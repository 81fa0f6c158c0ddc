"""Parameter points, twisted derivations, operators and the e/f/K action."""
import itertools
import random
from dataclasses import dataclass, field

from .freealg import FreePoly, multidegree, sub_degree, word_basis, word_index
from .scalars import QT, as_fmpq, fmpq


class ConstraintError(ValueError):
    pass


# ---------------------------------------------------------------- monomials in the q_ij

@dataclass(frozen=True)
class Relation:
    """coeff * prod q[var]^power = 1, with var = (i, j)."""
    powers: tuple
    coeff: object = fmpq(1)
    text: str = ""

    @staticmethod
    def make(powers, coeff=1, text=""):
        clean = {}
        for v, k in powers.items():
            if k:
                clean[v] = clean.get(v, 0) + k
        return Relation(tuple(sorted((v, k) for v, k in clean.items() if k)), as_fmpq(coeff), text)

    def __str__(self):
        return self.text or mono_text(self.coeff, dict(self.powers)) + " = 1"


def sigma_powers(*idx):
    """Exponents of sigma_(s) = prod_{i != j in s} q_ij."""
    out = {}
    for i in idx:
        for j in idx:
            if i != j:
                out[(i, j)] = out.get((i, j), 0) + 1
    return out


def mul_powers(*ps):
    out = {}
    for p in ps:
        for v, k in p.items():
            out[v] = out.get(v, 0) + k
    return {v: k for v, k in out.items() if k}


def scale_powers(p, s):
    return {v: k * s for v, k in p.items()}


def sigma_is_one(*idx, times=None):
    """Relation sigma_(idx) * extra = 1."""
    p = sigma_powers(*idx)
    if times:
        p = mul_powers(p, times)
    return Relation.make(p, 1, "")


def q_power(i, j, k=1):
    return {(i, j): k}


def mono_text(c, powers):
    parts = []
    for (i, j), k in sorted(powers.items()):
        parts.append(f"q[{i},{j}]" + (f"^{k}" if k != 1 else ""))
    body = "*".join(parts)
    if c == 1:
        return body or "1"
    if not body:
        return str(c)
    return f"{c}*{body}"


# ---------------------------------------------------------------- parameter point

@dataclass
class ParamSpec:
    """A parameter point q = {q_ij}, 1-indexed."""
    n: int
    field: object
    q: dict
    free: dict = field(default_factory=dict)        # free variable -> t exponent
    symbolic: dict = field(default_factory=dict)    # (i,j) -> (coeff, {free var: power})
    constraint_log: list = field(default_factory=list)
    relations: list = field(default_factory=list)

    def __post_init__(self):
        for (i, j), v in self.q.items():
            if not v:
                raise ConstraintError(f"q[{i},{j}] must be nonzero")
        self.Q = [[None] * (self.n + 1) for _ in range(self.n + 1)]
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                self.Q[i][j] = self.field(self.q[(i, j)])
        self._cache = {}

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    @property
    def one(self):
        return self.field.one

    @property
    def zero(self):
        return self.field.zero

    def sigma(self, i, j):
        return self.Q[i][j] * self.Q[j][i]

    def sigma_set(self, s):
        out = self.one
        for i in s:
            for j in s:
                if i != j:
                    out = out * self.Q[i][j]
        return out

    def monomial(self, powers, coeff=1):
        out = self.field(coeff)
        for (i, j), k in powers.items():
            out = out * self.Q[i][j] ** k
        return out

    def holds(self, rel):
        return self.monomial(dict(rel.powers), rel.coeff) == 1

    def is_symbolic(self):
        return bool(self.symbolic)

    def sqrt_q(self, i, j):
        return self.sqrt_monomial({(i, j): 1})

    def sqrt_monomial(self, powers):
        """Square root of a q-monomial when every t-exponent is even."""
        val = self.monomial(powers)
        data = val.monomial_data() if hasattr(val, "monomial_data") else None
        if data is None:
            raise ConstraintError("square root needs the symbolic backend")
        c, e = data
        if e % 2:
            raise ConstraintError("odd exponent; rebuild the point with doubled=True")
        p, q = int(c.p), int(c.q)
        rp, rq = _isqrt(p), _isqrt(q)
        if rp is None or rq is None:
            raise ConstraintError(f"coefficient {c} has no rational square root")
        return self.field.monomial(fmpq(rp, rq), e // 2)

    def with_q(self, q):
        return ParamSpec(self.n, self.field, q, dict(self.free), {},
                         list(self.constraint_log) + ["explicit rescaling"], list(self.relations))

    def describe(self):
        return {
            "N": self.n,
            "backend": self.field.describe(),
            "q": {f"{i},{j}": self.field.to_str(self.Q[i][j])
                  for i in range(1, self.n + 1) for j in range(1, self.n + 1)},
            "constraints": [str(r) for r in self.relations],
            "log": list(self.constraint_log),
        }

    # -- pretty printing of scalars in terms of free q variables
    def scalar_text(self, x):
        return pretty_scalar(self, x)


def _isqrt(n):
    if n < 0:
        return None
    r = int(n ** 0.5)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r if r * r == n else None


def from_table(n, field_, table, log=None):
    q = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            q[(i, j)] = field_(table[(i, j)])
    return ParamSpec(n, field_, q, constraint_log=list(log or ["explicit table"]))


def _sub(mono, subs):
    """Substitute eliminated variables into (coeff, powers)."""
    c, p = mono
    out_c, out_p = c, {}
    for v, k in p.items():
        if v in subs:
            sc, sp = subs[v]
            out_c = out_c * sc ** k
            for w, m in sp.items():
                out_p[w] = out_p.get(w, 0) + m * k
        else:
            out_p[v] = out_p.get(v, 0) + k
    return out_c, {v: k for v, k in out_p.items() if k}


def _collision_tests(n, bound):
    tests = []
    for size in range(2, n + 1):
        for s in itertools.combinations(range(1, n + 1), size):
            tests.append((f"sigma{s}", sigma_powers(*s)))
    for i in range(1, n + 1):
        for k in range(1, bound + 1):
            tests.append((f"q[{i},{i}]^{k}", {(i, i): k}))
    for i, j in itertools.permutations(range(1, n + 1), 2):
        for k in range(-bound, bound + 1):
            if k:
                tests.append((f"sigma({i},{j})*q[{i},{i}]^{k}",
                              mul_powers(sigma_powers(i, j), {(i, i): k})))
    return tests


def param_from_constraints(n, constraints=(), seed=0, exponent_range=None,
                           collision_bound=4, doubled=False, retries=60, extra_tests=()):
    """Symbolic parameter point on the surface cut out by monomial relations.

    Each relation eliminates its lexicographically last variable that occurs
    with exponent +-1; the remaining variables get distinct random exponents
    of t, redrawn until no untested monomial relation holds by accident.
    """
    variables = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    subs = {}
    log = []
    rels = []
    for rel in constraints:
        if not isinstance(rel, Relation):
            rel = Relation.make(*rel) if isinstance(rel, tuple) else Relation.make(rel)
        rels.append(rel)
        c, p = _sub((rel.coeff, dict(rel.powers)), subs)
        if not p:
            if c == 1:
                log.append(f"{rel}: implied by earlier constraints")
                continue
            raise ConstraintError(f"{rel} is inconsistent with earlier constraints")
        unit = [v for v, k in p.items() if abs(k) == 1]
        if not unit:
            raise ConstraintError(f"{rel}: no variable with exponent +-1 to eliminate")
        v = max(unit)
        k = p[v]
        rest = {w: m for w, m in p.items() if w != v}
        # v^k * c * rest = 1  ->  v = (c * rest)^(-k)
        sc = c ** (-k)
        sp = {w: -k * m for w, m in rest.items()}
        subs = {w: _sub(val, {v: (sc, sp)}) for w, val in subs.items()}
        subs[v] = (sc, sp)
        log.append(f"{rel}: eliminate q[{v[0]},{v[1]}] = {mono_text(sc, sp)}")
    free = [v for v in variables if v not in subs]
    sym = {}
    for v in variables:
        sym[v] = subs[v] if v in subs else (fmpq(1), {v: 1})
    tests = _collision_tests(n, collision_bound) + list(extra_tests)
    if exponent_range is None:
        exponent_range = max(6, len(free) // 2 + 2)
    rng = random.Random(seed)
    pool = [e for e in range(-exponent_range, exponent_range + 1) if e]
    for attempt in range(retries):
        draw = rng.sample(pool, len(free)) if len(free) <= len(pool) else None
        if draw is None:
            raise ConstraintError("exponent range too small")
        expo = dict(zip(free, draw))
        clash = None
        for name, powers in tests:
            c, p = _sub((fmpq(1), powers), subs)
            if not p:
                continue  # forced by the constraints (either 1 or a constant != 1)
            e = sum(expo[w] * m for w, m in p.items())
            if e == 0 and c == 1:
                clash = name
                break
        if clash is None:
            break
        log.append(f"draw {attempt}: accidental relation {clash}, redrawn")
    else:
        raise ConstraintError("could not find a collision-free point")
    scale = 2 if doubled else 1
    q = {}
    for v in variables:
        c, p = sym[v]
        e = sum(expo[w] * m for w, m in p.items()) * scale
        q[v] = QT.monomial(c, e)
    spec = ParamSpec(n, QT, q, free={w: expo[w] * scale for w in free},
                     symbolic=sym, constraint_log=log, relations=rels)
    for rel in rels:
        if not spec.holds(rel):
            raise ConstraintError(f"internal: {rel} fails after substitution")
    return spec


def generic_params(n, seed=0, **kw):
    return param_from_constraints(n, (), seed=seed, **kw)


# ---------------------------------------------------------------- derivations

def _check_index(i, n):
    if not 1 <= i <= n:
        raise IndexError(f"generator index {i} out of range 1..{n}")


def partial_word(i, w, Q):
    """d_i of a single word as a list of (word, coeff)."""
    out = []
    pref = None
    for k, a in enumerate(w):
        if a == i:
            out.append((w[:k] + w[k + 1:], pref if pref is not None else 1))
        pref = Q[i][a] if pref is None else pref * Q[i][a]
    return out


def right_partial_word(i, w, Q):
    out = []
    suf = None
    for k in range(len(w) - 1, -1, -1):
        a = w[k]
        if a == i:
            out.append((w[:k] + w[k + 1:], suf if suf is not None else 1))
        suf = Q[a][i] if suf is None else suf * Q[a][i]
    return out


def _apply_wordmap(fn, i, p, params):
    _check_index(i, params.n)
    out = {}
    Q = params.Q
    for w, c in p.terms.items():
        for u, s in fn(i, w, Q):
            v = c * s
            prev = out.get(u)
            out[u] = v if prev is None else prev + v
    return FreePoly._raw(p.n, {u: v for u, v in out.items() if v})


def apply_partial(i, p, params):
    """Left twisted derivation: d_i(xi_j x) = delta_ij x + q_ij xi_j d_i x."""
    return _apply_wordmap(partial_word, i, p, params)


def apply_right_partial(i, p, params):
    """Right twisted derivation: (x xi_j) <-d_i = delta_ij x + q_ji (x <-d_i) xi_j."""
    return _apply_wordmap(right_partial_word, i, p, params)


def q_bracket(a, b, alpha):
    """[a, b]_alpha = ab - alpha ba."""
    return a * b - (b * a).scale(alpha)


def derivation_matrix(i, d, params, right=False):
    """Sparse rows (indexed by word_basis(d - e_i)) of d_i on block d."""
    key = ("dmat", i, tuple(d), right)
    hit = params._cache.get(key)
    if hit is not None:
        return hit
    d = tuple(d)
    if len(d) != params.n:
        raise ValueError(f"multidegree {d} has wrong length for N={params.n}")
    lower = sub_degree(d, i)
    if lower is None:
        rows = []
    else:
        idx = word_index(lower)
        rows = [dict() for _ in range(len(idx))]
        fn = right_partial_word if right else partial_word
        for col, w in enumerate(word_basis(d)):
            for u, s in fn(i, w, params.Q):
                r = rows[idx[u]]
                prev = r.get(col)
                v = s if prev is None else prev + s
                if v:
                    r[col] = v
                else:
                    r.pop(col, None)
    params._cache[key] = rows
    return rows


def stacked_derivations(d, params, right=False):
    rows = []
    for i in range(1, params.n + 1):
        rows.extend(derivation_matrix(i, d, params, right))
    return rows


# ---------------------------------------------------------------- operators

class OperatorPoly:
    """Linear combination of d-words; word (i1..in) means d_i1 ... d_in,
    with d_in applied first."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {tuple(w): c for w, c in (terms or {}).items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            out[w] = c if s is None else s + c
        return OperatorPoly(self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return OperatorPoly(self.n, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, OperatorPoly):
            return self.scale(other)
        out = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                s = out.get(w)
                out[w] = a * b if s is None else s + a * b
        return OperatorPoly(self.n, out)

    __rmul__ = scale

    def multidegrees(self):
        return sorted({multidegree(w, self.n) for w in self.terms})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items()):
            parts.append(f"({c})*" + "*".join(f"d{i}" for i in w))
        return " + ".join(parts)

    __repr__ = __str__


def hat_map(p):
    """xi_i -> d_i as an algebra map."""
    return OperatorPoly(p.n, dict(p.terms))


def apply_dword(word, x, params):
    for i in reversed(word):
        if not x.terms:
            break
        x = apply_partial(i, x, params)
    return x


def operator_apply(op, x, params):
    out = FreePoly(x.n)
    # share work between d-words with a common right tail
    cache = {(): x}

    def tail(w):
        hit = cache.get(w)
        if hit is None:
            hit = apply_partial(w[0], tail(w[1:]), params)
            cache[w] = hit
        return hit
    for w, c in op.terms.items():
        out = out + tail(w).scale(c)
    return out


def operator_is_zero(op, params):
    """True iff a homogeneous operator annihilates its whole block (hence every word)."""
    from .constants import s_gram  # local import: constants builds on this module
    degs = op.multidegrees()
    if not degs:
        return True
    if len(degs) != 1:
        raise ValueError("operator is not homogeneous")
    d = degs[0]
    g = s_gram(d, params).matrix
    basis = word_basis(d)
    vec = [op.terms.get(w, 0) for w in basis]
    for col in range(len(basis)):
        s = 0
        for r, c in enumerate(vec):
            if c:
                s = s + c * g[r][col]
        if s:
            return False
    return True


# ---------------------------------------------------------------- K, e, f

def _scale_words(p, factor):
    return FreePoly._raw(p.n, {w: c * factor(w) for w, c in p.terms.items()})


def k_factor(i, w, params, upper=True):
    out = params.one
    Q = params.Q
    for a in w:
        out = out * (Q[i][a] if upper else 1 / Q[a][i])
    return out


def apply_K(i, sign, p, params):
    """K^i (sign 'upper'): xi_j -> q_ij xi_j;  K_i (sign 'lower'): xi_j -> xi_j / q_ji."""
    _check_index(i, params.n)
    upper = sign in ("upper", "^", "+", 1)
    return _scale_words(p, lambda w: k_factor(i, w, params, upper))


def apply_e(i, p):
    """e_i = left multiplication by xi_i."""
    _check_index(i, p.n)
    return FreePoly._raw(p.n, {(i,) + w: c for w, c in p.terms.items()})


def apply_f(i, p, params):
    """Lowering operator: removing a letter xi_i and applying K_i - K^i to what
    stands to its right.

    This is the unique operator with f_i(1) = 0 and [e_j, f_i] = delta_ij (K^i - K_i)
    for e_j acting by left multiplication.
    """
    _check_index(i, params.n)
    out = {}
    Q = params.Q
    for w, c in p.terms.items():
        lower = params.one
        upper = params.one
        for k in range(len(w) - 1, -1, -1):
            a = w[k]
            if a == i:
                u = w[:k] + w[k + 1:]
                v = c * (lower - upper)
                s = out.get(u)
                out[u] = v if s is None else s + v
            lower = lower / Q[a][i]
            upper = upper * Q[i][a]
    return FreePoly._raw(p.n, {u: v for u, v in out.items() if v})


def all_words(n, max_degree):
    for k in range(max_degree + 1):
        for w in itertools.product(range(1, n + 1), repeat=k):
            yield w


def verify_ef_relations(params, degree_bound=3):
    """Check the K/e/f relations as operator identities on all words up to the bound."""
    n = params.n
    failures = []
    checked = 0
    Kup = lambda i, x: apply_K(i, "upper", x, params)
    Klo = lambda i, x: apply_K(i, "lower", x, params)
    e = lambda i, x: apply_e(i, x)
    f = lambda i, x: apply_f(i, x, params)
    Q = params.Q
    for w in all_words(n, degree_bound):
        x = FreePoly(n, {w: 1})
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                checks = {
                    "K_iK_j": (Klo(i, Klo(j, x)), Klo(j, Klo(i, x))),
                    "K_iK^j": (Klo(i, Kup(j, x)), Kup(j, Klo(i, x))),
                    "K^iK^j": (Kup(i, Kup(j, x)), Kup(j, Kup(i, x))),
                    "K^i e_j": (Kup(i, e(j, x)), e(j, Kup(i, x)).scale(Q[i][j])),
                    "K_i e_j": (Klo(i, e(j, x)), e(j, Klo(i, x)).scale(1 / Q[j][i])),
                    "K^i f_j": (Kup(i, f(j, x)), f(j, Kup(i, x)).scale(1 / Q[i][j])),
                    "K_i f_j": (Klo(i, f(j, x)), f(j, Klo(i, x)).scale(Q[j][i])),
                    "[e_i,f_j]": (e(i, f(j, x)) - f(j, e(i, x)),
                                  (Kup(i, x) - Klo(i, x)) if i == j else FreePoly(n)),
                }
                for name, (lhs, rhs) in checks.items():
                    checked += 1
                    if lhs != rhs:
                        failures.append({"relation": name, "i": i, "j": j, "word": w})
    return {"ok": not failures, "checked": checked, "failures": failures[:20]}


# ---------------------------------------------------------------- printing

def pretty_scalar(params, x, max_norm=4):
    """Text for a coefficient: q-monomials in free variables where decodable, else t."""
    if not params.free:
        return params.field.to_str(x)
    table = params._cache.get("decode")
    if table is None:
        table = _decode_table(params.free, max_norm)
        params._cache["decode"] = table
    x = params.field(x)
    num_terms = _poly_terms(x.num)
    den_terms = _poly_terms(x.den)
    if len(den_terms) == 1:
        # Laurent polynomial: divide through by the monomial denominator
        k, c = den_terms[0]
        num_terms = [(e - k, a / c) for e, a in num_terms]
        den_terms = [(0, fmpq(1))]
    try:
        num = _decoded_poly(num_terms, table)
        den = _decoded_poly(den_terms, table)
    except KeyError:
        return params.field.to_str(x)
    if den == "1":
        return num
    return f"({num})/({den})"


def _poly_terms(poly):
    return [(e, c) for e, c in enumerate(poly.coeffs()) if c != 0]


def _decode_table(free, max_norm):
    names = sorted(free)
    best = {}
    ranges = range(-max_norm, max_norm + 1)
    for combo in itertools.product(ranges, repeat=len(names)) if len(names) <= 4 else _sparse_combos(len(names), max_norm):
        norm = sum(abs(k) for k in combo)
        if norm > max_norm:
            continue
        e = sum(free[v] * k for v, k in zip(names, combo))
        cur = best.get(e)
        powers = {v: k for v, k in zip(names, combo) if k}
        if cur is None or norm < cur[0]:
            best[e] = (norm, powers, False)
        elif norm == cur[0] and powers != cur[1]:
            best[e] = (norm, cur[1], True)
    return {e: p for e, (nrm, p, amb) in best.items() if not amb}


def _sparse_combos(m, max_norm):
    # vectors with at most max_norm total weight, built by placing units
    seen = set()
    for size in range(0, max_norm + 1):
        for pos in itertools.combinations_with_replacement(range(m), size):
            for signs in itertools.product((1, -1), repeat=size):
                v = [0] * m
                for p_, s in zip(pos, signs):
                    v[p_] += s
                t = tuple(v)
                if t not in seen:
                    seen.add(t)
                    yield t


def _decoded_poly(terms, table):
    if not terms:
        return "0"
    parts = []
    for e, c in sorted(terms, key=lambda ec: -ec[0]):
        p = table[e]
        body = mono_text(abs(c), p)
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out
