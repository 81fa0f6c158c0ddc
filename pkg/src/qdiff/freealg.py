"""Words and polynomials of the free unital algebra on generators 1..N."""
from functools import lru_cache
from math import factorial

from .scalars import backend_of

# A word is a tuple of 1-indexed generator labels; () is the unit.


def multidegree(word, n):
    d = [0] * n
    for i in word:
        d[i - 1] += 1
    return tuple(d)


def word_key(word, n=None):
    """Sort key: total degree, then multidegree (lex), then letters (lex)."""
    if n is None:
        n = max(word) if word else 0
    return (len(word), multidegree(word, n), word)


@lru_cache(maxsize=None)
def word_basis(d):
    """All words of multidegree d in lexicographic order."""
    d = tuple(d)
    if sum(d) == 0:
        return ((),)
    out = []
    for i, c in enumerate(d):
        if c:
            rest = d[:i] + (c - 1,) + d[i + 1:]
            out.extend((i + 1,) + w for w in word_basis(rest))
    return tuple(out)


@lru_cache(maxsize=None)
def word_index(d):
    return {w: k for k, w in enumerate(word_basis(tuple(d)))}


def block_size(d):
    out = factorial(sum(d))
    for c in d:
        out //= factorial(c)
    return out


def sub_degree(d, i):
    """d - e_i, or None if negative."""
    if d[i - 1] == 0:
        return None
    return d[:i - 1] + (d[i - 1] - 1,) + d[i:]


def add_degree(d, e):
    return tuple(a + b for a, b in zip(d, e))


def degrees_below(d):
    """All multidegrees e with 0 <= e <= d componentwise."""
    out = [()]
    for c in d:
        out = [x + (k,) for x in out for k in range(c + 1)]
    return out


def degrees_of_total(n, total):
    if n == 1:
        return [(total,)]
    return [(k,) + rest for k in range(total, -1, -1) for rest in degrees_of_total(n - 1, total - k)]


class FreePoly:
    """Finitely supported map word -> coefficient with no stored zeros."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for w, c in (terms.items() if isinstance(terms, dict) else terms):
                w = tuple(w)
                if any(not 1 <= i <= n for i in w):
                    raise ValueError(f"letter out of range in {w} for N={n}")
                if c:
                    s = self.terms.get(w)
                    if s is None:
                        self.terms[w] = c
                    else:
                        s = s + c
                        if s:
                            self.terms[w] = s
                        else:
                            del self.terms[w]

    @classmethod
    def _raw(cls, n, terms):
        p = cls.__new__(cls)
        p.n = n
        p.terms = terms
        return p

    @classmethod
    def word(cls, n, w, coeff=1):
        return cls(n, {tuple(w): coeff})

    @classmethod
    def gen(cls, n, i):
        return cls(n, {(i,): 1})

    @classmethod
    def scalar(cls, n, c):
        return cls(n, {(): c})

    def copy(self):
        return FreePoly._raw(self.n, dict(self.terms))

    def _check(self, other):
        if other.n != self.n:
            raise ValueError(f"generator count mismatch {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, FreePoly):
            return self + FreePoly.scalar(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            if s is None:
                out[w] = c
            else:
                s = s + c
                if s:
                    out[w] = s
                else:
                    del out[w]
        return FreePoly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return FreePoly._raw(self.n, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return FreePoly(self.n)
        return FreePoly._raw(self.n, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, FreePoly):
            return self.scale(other)
        self._check(other)
        out = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                c = a * b
                s = out.get(w)
                if s is None:
                    out[w] = c
                else:
                    out[w] = s + c
        return FreePoly._raw(self.n, {w: c for w, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, FreePoly):
            if other.n != self.n or len(other.terms) != len(self.terms):
                return False
            return all(other.terms.get(w) == c for w, c in self.terms.items())
        if not other:
            return not self.terms
        return False

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def coeff(self, w, default=0):
        return self.terms.get(tuple(w), default)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: word_key(kv[0], self.n))

    def support(self):
        return [w for w, _ in self.sorted_terms()]

    def multidegrees(self):
        return sorted({multidegree(w, self.n) for w in self.terms})

    def multidegree(self):
        """The unique multidegree of a nonzero homogeneous polynomial."""
        ds = self.multidegrees()
        if len(ds) != 1:
            raise ValueError("polynomial is not multihomogeneous")
        return ds[0]

    def degree(self):
        return max((len(w) for w in self.terms), default=-1)

    def component(self, d):
        d = tuple(d)
        return FreePoly._raw(self.n, {w: c for w, c in self.terms.items()
                                      if multidegree(w, self.n) == d})

    def projection_0(self, zero=0):
        return self.terms.get((), zero)

    def backend(self):
        tags = {backend_of(c) for c in self.terms.values()}
        tags.discard("rational")
        return tags.pop() if tags else "rational"

    def map_coeffs(self, f):
        out = {}
        for w, c in self.terms.items():
            v = f(c)
            if v:
                out[w] = v
        return FreePoly._raw(self.n, out)

    def relabel(self, perm):
        """Apply the letter map i -> perm[i] (a dict or callable)."""
        f = perm if callable(perm) else perm.__getitem__
        return FreePoly(self.n, {tuple(f(i) for i in w): c for w, c in self.terms.items()})

    def vector(self, d):
        """Coefficient list over word_basis(d)."""
        return [self.terms.get(w, 0) for w in word_basis(tuple(d))]

    @classmethod
    def from_vector(cls, n, d, vec):
        return cls(n, {w: c for w, c in zip(word_basis(tuple(d)), vec) if c})

    def __str__(self):
        return poly_text(self)

    __repr__ = __str__


def poly_text(p, coeff_text=str):
    """Canonical text such as ``x1*x2 - (t^3)*x2*x1``."""
    if not p.terms:
        return "0"
    parts = []
    for w, c in p.sorted_terms():
        mono = "*".join(f"x{i}" for i in w)
        s = coeff_text(c)
        neg = False
        if s.startswith("-") and _single_term(s[1:]):
            neg, s = True, s[1:]
        if s == "1" and mono:
            body = mono
        elif not mono:
            body = s if _is_atomic(s) else f"({s})"
        else:
            body = (s if _is_atomic(s) else f"({s})") + "*" + mono
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _single_term(s):
    depth = 0
    for k, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and k > 0 and s[k - 1] == " ":
            return False
    return True


def _is_atomic(s):
    return all(ch.isdigit() or ch == "/" for ch in s) and s != ""


def gen(n, i):
    return FreePoly.gen(n, i)


def word_poly(n, *letters):
    return FreePoly.word(n, letters)


def monomial(n, letters, coeff=1):
    return FreePoly.word(n, letters, coeff)
