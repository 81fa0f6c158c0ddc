"""Exact sparse Gaussian elimination over any field in ``scalars``.

Rows are dicts {column: value} without zero entries.
"""
from .scalars import RationalFunction, CyclotomicNumber, as_fmpq


def _inv(x):
    if isinstance(x, int):
        return 1 / as_fmpq(x)
    return 1 / x


def _cost(x):
    if isinstance(x, RationalFunction):
        return x.num.degree() + x.den.degree() + 1
    if isinstance(x, CyclotomicNumber):
        return sum(1 for c in x.poly.coeffs() if c != 0)
    return 0


def sparse_rows(matrix):
    """Dense list-of-lists -> sparse rows."""
    return [{j: v for j, v in enumerate(row) if v} for row in matrix]


def _axpy(target, f, src):
    # target -= f * src, in place
    for c, v in src.items():
        s = target.get(c)
        if s is None:
            target[c] = -(f * v)
        else:
            s = s - f * v
            if s:
                target[c] = s
            else:
                del target[c]


def echelon(rows, ncols, reduced=True):
    """Row echelon form with unit pivots at the leftmost possible columns.

    Returns (pivots, rows) where rows[k] has leading entry 1 at pivots[k].
    With reduced=True the result is the (unique) reduced row echelon form.
    """
    work = [dict(r) for r in rows if r]
    pivots, out = [], []
    by_col = {}
    for idx, r in enumerate(work):
        for c in r:
            by_col.setdefault(c, set()).add(idx)
    alive = set(range(len(work)))
    for col in range(ncols):
        cand = [i for i in by_col.get(col, ()) if i in alive and col in work[i]]
        if not cand:
            continue
        p = min(cand, key=lambda i: (len(work[i]), _cost(work[i][col]), i))
        alive.discard(p)
        prow = work[p]
        inv = _inv(prow[col])
        if not (prow[col] == 1):
            prow = {c: v * inv for c, v in prow.items()}
            prow[col] = prow[col] * 0 + 1
        work[p] = prow
        for i in cand:
            if i == p:
                continue
            r = work[i]
            f = r[col]
            _axpy(r, f, prow)
            for c in prow:
                if c in r:
                    by_col.setdefault(c, set()).add(i)
            if not r:
                alive.discard(i)
        pivots.append(col)
        out.append(prow)
    if reduced:
        for k in range(len(out) - 1, -1, -1):
            col = pivots[k]
            prow = out[k]
            for j in range(k):
                r = out[j]
                f = r.get(col)
                if f:
                    _axpy(r, f, prow)
    return pivots, out


def rank(rows, ncols):
    return len(echelon(rows, ncols, reduced=False)[0])


def nullspace(rows, ncols, one=1):
    """Kernel basis in reduced echelon form (leading 1 at lowest column)."""
    pivots, red = echelon(rows, ncols, reduced=True)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: one}
        for p, r in zip(pivots, red):
            x = r.get(f)
            if x:
                v[p] = -x
        basis.append(v)
    # canonical form: echelon of the kernel vectors themselves
    _, canon = echelon(basis, ncols, reduced=True)
    return canon


def row_space(vectors, ncols):
    return echelon(vectors, ncols, reduced=True)


def reduce_vector(vec, pivots, red):
    """Reduce vec modulo an RREF basis; returns the remainder dict."""
    v = dict(vec)
    for p, r in zip(pivots, red):
        f = v.get(p)
        if f:
            _axpy(v, f, r)
    return v


def in_span(vec, pivots, red):
    return not reduce_vector(vec, pivots, red)


def solve(rows, ncols, rhs):
    """Particular solution x of M x = rhs with free variables set to zero.

    rhs is a dict {row: value}. Returns (x, None) or (None, witness) where
    witness is a dict y over rows with y M = 0 and y . rhs != 0.
    """
    nrows = len(rows)
    aug = []
    for i, r in enumerate(rows):
        a = dict(r)
        a[ncols + i] = 1
        aug.append(a)
    # eliminate on the first ncols columns only, tracking row combinations
    pivots, red = echelon(aug, ncols + nrows, reduced=True)
    x = {}
    for p, r in zip(pivots, red):
        if p >= ncols:
            # row with zero coefficient part: a left null vector
            y = {c - ncols: v for c, v in r.items() if c >= ncols}
            val = sum((v * rhs.get(c, 0) for c, v in y.items()), 0)
            if val:
                return None, y
            continue
        val = 0
        for c, v in r.items():
            if c >= ncols:
                val = val + v * rhs.get(c - ncols, 0)
        if val:
            x[p] = val
    # x uses the transformation rows: red row k = sum_i T[k,i] M[i]; since the
    # coefficient part is reduced, x_p = (T rhs)_k when free variables are zero
    return x, None


def mat_vec(rows, vec):
    out = {}
    for i, r in enumerate(rows):
        s = 0
        for c, v in r.items():
            x = vec.get(c)
            if x:
                s = s + v * x
        if s:
            out[i] = s
    return out


def inverse(matrix):
    """Inverse of a dense square matrix (list of lists)."""
    n = len(matrix)
    aug = []
    for i, row in enumerate(matrix):
        r = {j: v for j, v in enumerate(row) if v}
        r[n + i] = 1
        aug.append(r)
    pivots, red = echelon(aug, 2 * n, reduced=True)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    zero = matrix[0][0] * 0
    return [[red[i].get(n + j, zero) for j in range(n)] for i in range(n)]


def determinant(matrix):
    n = len(matrix)
    a = [list(r) for r in matrix]
    det = a[0][0] * 0 + 1
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return det * 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det = det * a[c][c]
        inv = _inv(a[c][c])
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] * inv
                for k in range(c, n):
                    a[r][k] = a[r][k] - f * a[c][k]
    return det


def transpose(matrix):
    return [list(col) for col in zip(*matrix)]


def mat_mul(a, b):
    zero = a[0][0] * 0 if a and a[0] else 0
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), zero) for col in cols] for row in a]


# ---------------------------------------------------------------- mod p

def modp_value(x, p, t0=None, zeta=None):
    """Image of a field element in F_p (t -> t0, zeta -> root mod p)."""
    if isinstance(x, RationalFunction):
        n = _poly_mod(x.num, p, t0)
        d = _poly_mod(x.den, p, t0)
        if d == 0:
            raise ZeroDivisionError("bad reduction point")
        return n * pow(d, -1, p) % p
    if isinstance(x, CyclotomicNumber):
        return _poly_mod(x.poly, p, zeta)
    if isinstance(x, int):
        return x % p
    num, den = int(x.p), int(x.q)
    if den % p == 0:
        raise ZeroDivisionError("bad reduction prime")
    return num * pow(den, -1, p) % p


def _poly_mod(poly, p, a):
    out = 0
    for c in reversed(poly.coeffs()):
        out = (out * a + modp_value(c, p)) % p
    return out


def rank_mod_p(rows, ncols, p):
    """Rank of a matrix with entries already in F_p (sparse dict rows)."""
    work = [dict(r) for r in rows if r]
    rk = 0
    for col in range(ncols):
        piv = next((r for r in work if r.get(col)), None)
        if piv is None:
            continue
        work.remove(piv)
        inv = pow(piv[col], -1, p)
        for r in work:
            f = r.get(col)
            if f:
                f = f * inv % p
                for c, v in piv.items():
                    s = (r.get(c, 0) - f * v) % p
                    if s:
                        r[c] = s
                    else:
                        r.pop(c, None)
        rk += 1
    return rk

