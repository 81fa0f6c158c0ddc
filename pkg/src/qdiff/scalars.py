"""Exact coefficient fields.

Three backends share one element protocol (+, -, *, /, ==, bool):

* ``rational``   -- elements are ``flint.fmpq``
* ``cyclotomic`` -- ``CyclotomicNumber``, residues modulo the n-th cyclotomic polynomial
* ``ratfunc``    -- ``RationalFunction`` in one formal symbol t

Plain ints and fmpq values coerce into every backend.
"""
import re
from fractions import Fraction

import flint

fmpq = flint.fmpq
QPoly = flint.fmpq_poly


class BackendMismatch(TypeError):
    pass


def as_fmpq(x):
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return fmpq(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational")


def cyclotomic_polynomial(n):
    """Integer polynomial Phi_n as a flint.fmpz_poly."""
    if n < 1:
        raise ValueError("order must be positive")
    return flint.fmpz_poly.cyclotomic(n)


def _poly_text(p, var):
    coeffs = p.coeffs()
    terms = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = str(a)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        terms.append(("-" if neg else "+", body))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------- Q(t)

class RationalFunction:
    """num/den in Q[t], den monic, gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, QPoly):
            num = QPoly([as_fmpq(num)])
        if den is None:
            self.num, self.den = num, QPoly([1])
            return
        if not isinstance(den, QPoly):
            den = QPoly([as_fmpq(den)])
        if den.degree() < 0:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.degree() < 0:
                num, den = num, QPoly([1])
            else:
                if den.degree() > 0:
                    g = num.gcd(den)
                    if g.degree() > 0:
                        num = num // g
                        den = den // g
            lc = den.coeffs()[-1]
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num, self.den = num, den

    backend = "ratfunc"

    @staticmethod
    def monomial(c, e):
        c = as_fmpq(c)
        if e >= 0:
            return RationalFunction(QPoly([0] * e + [c]), None)
        return RationalFunction(QPoly([c]), QPoly([0] * (-e) + [1]), _reduced=True)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, fmpq, Fraction)):
            return RationalFunction(QPoly([as_fmpq(other)]))
        if isinstance(other, CyclotomicNumber):
            raise BackendMismatch("ratfunc vs cyclotomic")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            if self.den.degree() == 0:
                return RationalFunction(self.num + o.num, None)
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.degree() == 0 and o.den.degree() == 0:
            return RationalFunction(self.num * o.num, None)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self):
        if self.num.degree() < 0:
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num, _reduced=False)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inv()

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, _reduced=True)

    def __bool__(self):
        return self.num.degree() >= 0

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RationalFunction) else other
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((tuple(str(c) for c in self.num.coeffs()),
                     tuple(str(c) for c in self.den.coeffs())))

    def is_constant(self):
        return self.num.degree() <= 0 and self.den.degree() == 0

    def constant_value(self):
        c = self.num.coeffs()
        return c[0] if c else fmpq(0)

    def monomial_data(self):
        """(c, e) if self == c*t^e, else None."""
        nc, dc = self.num.coeffs(), self.den.coeffs()
        nz = [i for i, c in enumerate(nc) if c != 0]
        dz = [i for i, c in enumerate(dc) if c != 0]
        if len(nz) != 1 or len(dz) != 1:
            return None
        return nc[nz[0]], nz[0] - dz[0]

    def valuation_at(self, a):
        """Order of vanishing at t = a (negative for a pole)."""
        root = QPoly([-as_fmpq(a), 1])

        def order(p):
            k = 0
            while p.degree() >= 0 and p(as_fmpq(a)) == 0:
                p = p // root
                k += 1
            return k
        if not self:
            return None
        return order(self.num) - order(self.den)

    def evaluate(self, a):
        a = as_fmpq(a)
        d = self.den(a)
        if d == 0:
            raise ZeroDivisionError("pole")
        return self.num(a) / d

    def __str__(self):
        if self.den.degree() == 0:
            return _poly_text(self.num, "t")
        n = _poly_text(self.num, "t")
        if len(self.num.coeffs()) > 1 and sum(1 for c in self.num.coeffs() if c != 0) > 1:
            n = f"({n})"
        return f"{n}/({_poly_text(self.den, 't')})"

    __repr__ = __str__


# ---------------------------------------------------------------- Q(zeta_n)

class CyclotomicNumber:
    """Reduced residue modulo Phi_n, coefficients over Q."""

    __slots__ = ("order", "poly")
    _phi_cache = {}

    def __init__(self, order, poly):
        phi = self.phi(order)
        if not isinstance(poly, QPoly):
            poly = QPoly([as_fmpq(c) for c in poly])
        self.order = order
        self.poly = poly % phi if poly.degree() >= phi.degree() else poly

    backend = "cyclotomic"

    @classmethod
    def phi(cls, n):
        p = cls._phi_cache.get(n)
        if p is None:
            p = QPoly(cyclotomic_polynomial(n).coeffs())
            cls._phi_cache[n] = p
        return p

    @classmethod
    def zeta(cls, n):
        return cls(n, QPoly([0, 1]))

    @property
    def coeffs(self):
        d = self.phi(self.order).degree()
        c = list(self.poly.coeffs())
        return c + [fmpq(0)] * (d - len(c))

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise BackendMismatch(f"Q(zeta_{self.order}) vs Q(zeta_{other.order})")
            return other
        if isinstance(other, (int, fmpq, Fraction)):
            return CyclotomicNumber(self.order, QPoly([as_fmpq(other)]))
        if isinstance(other, RationalFunction):
            raise BackendMismatch("cyclotomic vs ratfunc")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.order, self.poly + o.poly)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, -self.poly)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.order, self.poly - o.poly)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.order, o.poly - self.poly)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.order, self.poly * o.poly)

    __rmul__ = __mul__

    def inv(self):
        if self.poly.degree() < 0:
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = self.poly.xgcd(self.phi(self.order))
        # g is a nonzero constant since Phi_n is irreducible
        return CyclotomicNumber(self.order, s / g.coeffs()[0])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inv()

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        r = CyclotomicNumber(self.order, QPoly([1]))
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __bool__(self):
        return self.poly.degree() >= 0

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except BackendMismatch:
            return False
        if o is NotImplemented:
            return False
        return self.poly == o.poly

    def __hash__(self):
        return hash((self.order, tuple(str(c) for c in self.poly.coeffs())))

    def is_constant(self):
        return self.poly.degree() <= 0

    def constant_value(self):
        c = self.poly.coeffs()
        return c[0] if c else fmpq(0)

    def __str__(self):
        return _poly_text(self.poly, "z")

    __repr__ = __str__


# ---------------------------------------------------------------- backends

class Field:
    tag = None

    def __call__(self, x):
        return self.coerce(x)

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)


class RationalField(Field):
    tag = "rational"

    def coerce(self, x):
        if isinstance(x, (RationalFunction, CyclotomicNumber)):
            if not x.is_constant():
                raise BackendMismatch(f"{x} is not rational")
            return x.constant_value()
        return as_fmpq(x)

    def to_str(self, x):
        return str(as_fmpq(x))

    def parse(self, s):
        return as_fmpq(s)

    def describe(self):
        return {"kind": "rational"}

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")


class CyclotomicField(Field):
    tag = "cyclotomic"

    def __init__(self, order):
        self.order = order

    def coerce(self, x):
        if isinstance(x, CyclotomicNumber):
            if x.order != self.order:
                raise BackendMismatch("cyclotomic order mismatch")
            return x
        if isinstance(x, RationalFunction):
            raise BackendMismatch("ratfunc into cyclotomic")
        return CyclotomicNumber(self.order, QPoly([as_fmpq(x)]))

    @property
    def zeta(self):
        return CyclotomicNumber.zeta(self.order)

    def to_str(self, x):
        return str(self.coerce(x))

    def to_json(self, x):
        return {"order": self.order, "coeffs": [str(c) for c in self.coerce(x).coeffs]}

    def from_json(self, obj):
        if obj["order"] != self.order:
            raise BackendMismatch("cyclotomic order mismatch")
        return CyclotomicNumber(self.order, [as_fmpq(c) for c in obj["coeffs"]])

    def parse(self, s):
        return self.coerce(parse_univariate(s, "z", lambda c: self.coerce(c), self.zeta))

    def describe(self):
        return {"kind": "cyclotomic", "order": self.order}

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.order == self.order

    def __hash__(self):
        return hash(("cyclotomic", self.order))


class FunctionField(Field):
    tag = "ratfunc"

    def coerce(self, x):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, CyclotomicNumber):
            raise BackendMismatch("cyclotomic into ratfunc")
        return RationalFunction(QPoly([as_fmpq(x)]))

    @property
    def t(self):
        return RationalFunction.monomial(1, 1)

    def monomial(self, c, e):
        return RationalFunction.monomial(c, e)

    def to_str(self, x):
        return str(self.coerce(x))

    def parse(self, s):
        return self.coerce(parse_univariate(s, "t", self.coerce, self.t))

    def describe(self):
        return {"kind": "ratfunc", "symbol": "t"}

    def __eq__(self, other):
        return isinstance(other, FunctionField)

    def __hash__(self):
        return hash("ratfunc")


QQ = RationalField()
QT = FunctionField()


def backend_of(x):
    if isinstance(x, RationalFunction):
        return "ratfunc"
    if isinstance(x, CyclotomicNumber):
        return "cyclotomic"
    return "rational"


def field_from_description(desc):
    kind = desc["kind"] if isinstance(desc, dict) else desc
    if kind == "rational":
        return QQ
    if kind == "ratfunc":
        return QT
    if kind == "cyclotomic":
        return CyclotomicField(int(desc["order"]))
    raise ValueError(f"unknown backend {kind!r}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def parse_univariate(text, var, lift, gen):
    """Parse +,-,*,/,^,( ) expressions over rationals in one symbol."""
    toks = []
    for num, name, op in _TOKEN.findall(text):
        if num:
            toks.append(("n", int(num)))
        elif name:
            if name != var:
                raise ValueError(f"unknown symbol {name!r} in {text!r}")
            toks.append(("v", name))
        elif op.strip():
            toks.append(("o", op))
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        pos += 1
        return toks[pos - 1]

    def expr():
        v = term()
        while peek() in (("o", "+"), ("o", "-")):
            op = take()[1]
            r = term()
            v = v + r if op == "+" else v - r
        return v

    def term():
        v = unary()
        while peek() in (("o", "*"), ("o", "/")):
            op = take()[1]
            r = unary()
            v = v * r if op == "*" else v / r
        return v

    def unary():
        if peek() == ("o", "-"):
            take()
            return -unary()
        if peek() == ("o", "+"):
            take()
            return unary()
        return power()

    def power():
        b = atom()
        if peek() == ("o", "^"):
            take()
            neg = False
            if peek() == ("o", "-"):
                take()
                neg = True
            kind, e = take()
            if kind != "n":
                raise ValueError(f"bad exponent in {text!r}")
            return b ** (-e if neg else e)
        return b

    def atom():
        kind, val = take() if pos < len(toks) else (None, None)
        if kind == "n":
            return lift(val)
        if kind == "v":
            return gen
        if (kind, val) == ("o", "("):
            v = expr()
            if take() != ("o", ")"):
                raise ValueError(f"unbalanced parenthesis in {text!r}")
            return v
        raise ValueError(f"unexpected token {val!r} in {text!r}")

    out = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return lift(out) if not isinstance(out, (RationalFunction, CyclotomicNumber)) else out


# ---------------------------------------------------------------- q-numbers

def q_integer(r, q):
    """[r]_q = 1 + q + ... + q^(r-1)."""
    s = q * 0
    p = q * 0 + 1
    for _ in range(r):
        s = s + p
        p = p * q
    return s


def q_factorial(n, q):
    out = q * 0 + 1
    for k in range(1, n + 1):
        out = out * q_integer(k, q)
    return out


def q_binomial(k, m, q):
    """Gaussian binomial via the q-Pascal rule; never divides."""
    if m < 0 or m > k:
        raise ValueError("need 0 <= m <= k")
    one = q * 0 + 1
    row = [one]
    for n in range(1, k + 1):
        new = [one] * (n + 1)
        qm = one
        for j in range(1, n):
            qm = qm * q
            new[j] = row[j - 1] + qm * row[j]
        row = new
    return row[m]


def q_binomial_by_factorials(k, m, q):
    """[k]!/([m]![k-m]!); raises at roots of unity where the denominator vanishes."""
    den = q_factorial(m, q) * q_factorial(k - m, q)
    if not den:
        raise ZeroDivisionError(f"[{m}]![{k - m}]! vanishes at q = {q}")
    return q_factorial(k, q) / den
