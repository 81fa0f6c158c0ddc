"""Batch command-line front end: parameter files, expressions, JSON reports."""
import argparse
import json
import re
import sys

from . import acceptance
from . import classification as cl
from . import kacmoody as km
from .constants import (ConsistencyError, find_constants, ideal_slice, normal_form, quotient_basis,
                        s_form, s_gram)
from .freealg import FreePoly, poly_text
from .qstructure import (ConstraintError, Relation, from_table, param_from_constraints,
                         pretty_scalar, sigma_powers)
from .scalars import QT, fmpq, BackendMismatch, field_from_description
from .taylor import OneForm, infer_degree, solve_gradient, taylor_coefficients, taylor_reconstruct

SCHEMA = 1


class UsageError(ValueError):
    pass


class ParseError(UsageError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


# ---------------------------------------------------------------- expressions

_TOKENS = re.compile(r"\s*(?:(?P<num>\d+)|(?P<gen>x\d+)|(?P<q>q\[\s*\d+\s*,\s*\d+\s*\])|(?P<sym>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m or m.end() == pos:
            while text[pos].isspace():
                pos += 1
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def parse_expression(text, params):
    """Parse sums of scalar-weighted words over x<i>, q[i,j], rationals and the backend symbol."""
    toks = _tokenize(text)
    n = params.n
    symbol = {"ratfunc": "t", "cyclotomic": "z"}.get(params.field.tag)
    k = 0

    def peek():
        return toks[k] if k < len(toks) else (None, None, len(text))

    def take():
        nonlocal k
        k += 1
        return toks[k - 1]

    def scalar(v):
        return FreePoly.scalar(n, params.field(v))

    def as_scalar(p, pos):
        if not p:
            return params.zero
        if set(p.terms) != {()}:
            raise ParseError("expected a scalar", pos)
        return p.terms[()]

    def expr():
        v = term()
        while peek()[1] in ("+", "-") and peek()[0] == "op":
            op = take()[1]
            r = term()
            v = v + r if op == "+" else v - r
        return v

    def term():
        v = unary()
        while peek()[0] == "op" and peek()[1] in ("*", "/"):
            op, pos = take()[1], peek()[2]
            r = unary()
            if op == "*":
                v = v * r
            else:
                c = as_scalar(r, pos)
                if not c:
                    raise ParseError("division by zero", pos)
                v = v.scale(1 / c)
        return v

    def unary():
        if peek()[:2] == ("op", "-"):
            take()
            return -unary()
        if peek()[:2] == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        pos = peek()[2]
        b = atom()
        if peek()[:2] == ("op", "^"):
            take()
            neg = False
            if peek()[:2] == ("op", "-"):
                take()
                neg = True
            kind, val, epos = take() if k < len(toks) else (None, None, len(text))
            if kind != "num":
                raise ParseError("exponent must be an integer", epos)
            e = int(val)
            if neg:
                c = as_scalar(b, pos)
                if not c:
                    raise ParseError("negative power of zero", pos)
                return scalar(c ** (-e))
            out = scalar(1)
            for _ in range(e):
                out = out * b
            return out
        return b

    def atom():
        if k >= len(toks):
            raise ParseError("unexpected end of input", len(text))
        kind, val, pos = take()
        if kind == "num":
            return scalar(int(val))
        if kind == "gen":
            i = int(val[1:])
            if not 1 <= i <= n:
                raise ParseError(f"unknown generator {val} for N={n}", pos)
            return FreePoly.gen(n, i)
        if kind == "q":
            i, j = (int(s) for s in re.findall(r"\d+", val))
            if not (1 <= i <= n and 1 <= j <= n):
                raise ParseError(f"parameter {val} out of range", pos)
            return FreePoly.scalar(n, params.Q[i][j])
        if kind == "sym":
            if val != symbol:
                raise ParseError(f"unknown symbol {val!r}", pos)
            return FreePoly.scalar(n, params.field.t if symbol == "t" else params.field.zeta)
        if kind == "op" and val == "(":
            v = expr()
            if peek()[:2] != ("op", ")"):
                raise ParseError("expected ')'", peek()[2])
            take()
            return v
        raise ParseError(f"unexpected token {val!r}", pos)

    out = expr()
    if k != len(toks):
        raise ParseError(f"trailing input {toks[k][1]!r}", toks[k][2])
    return out


# ---------------------------------------------------------------- parameter files

_FACTOR = re.compile(r"\s*(?:(sigma)\(([\d,\s]+)\)|q\[\s*(\d+)\s*,\s*(\d+)\s*\]|(\d+))\s*(?:\^\s*(-?\d+))?\s*")


def _parse_side(text):
    coeff, powers = fmpq(1), {}
    pos, op = 0, "*"
    text = text.strip()
    while True:
        m = _FACTOR.match(text, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse constraint factor in {text!r} at {pos}")
        sig, idx, i, j, num, e = m.groups()
        e = int(e) if e else 1
        if op == "/":
            e = -e
        if sig:
            ids = [int(s) for s in idx.split(",")]
            for v, kk in sigma_powers(*ids).items():
                powers[v] = powers.get(v, 0) + kk * e
        elif i:
            v = (int(i), int(j))
            powers[v] = powers.get(v, 0) + e
        else:
            coeff = coeff * fmpq(int(num)) ** e
        pos = m.end()
        if pos >= len(text):
            break
        op = text[pos]
        if op not in "*/":
            raise UsageError(f"expected '*' or '/' in {text!r} at {pos}")
        pos += 1
    return coeff, powers


def parse_constraint(text):
    """'lhs = rhs' with products of sigma(i,j,..), q[i,j], integers and ^k."""
    if text.count("=") != 1:
        raise UsageError(f"constraint needs exactly one '=': {text!r}")
    lhs, rhs = text.split("=")
    if lhs.strip().startswith("-") or rhs.strip().startswith("-"):
        neg = lhs.strip().startswith("-") != rhs.strip().startswith("-")
        lhs, rhs = lhs.strip().lstrip("-"), rhs.strip().lstrip("-")
    else:
        neg = False
    lc, lp = _parse_side(lhs)
    rc, rp = _parse_side(rhs)
    powers = dict(lp)
    for v, kk in rp.items():
        powers[v] = powers.get(v, 0) - kk
    coeff = lc / rc
    if neg:
        coeff = -coeff
    return Relation.make(powers, coeff, text.strip())


def load_params(spec):
    """ParamSpec from a dict (already-loaded JSON)."""
    try:
        n = int(spec["N"])
    except (KeyError, TypeError, ValueError):
        raise UsageError("parameter file needs an integer N")
    backend = spec.get("backend", "ratfunc")
    field = field_from_description(backend)
    if "q" in spec:
        # explicit table; any listed constraints must hold on it (resolved reports re-load)
        table = {}
        for key, val in spec["q"].items():
            i, j = (int(s) for s in key.split(","))
            table[(i, j)] = field.parse(str(val))
        missing = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if (i, j) not in table]
        if missing:
            raise UsageError(f"q table is missing entries {missing}")
        p = from_table(n, field, table)
        for c in spec.get("constraints", []):
            rel = parse_constraint(c)
            if not p.holds(rel):
                raise UsageError(f"constraint {c!r} fails on the q table")
            p.relations.append(rel)
        return p
    if field != QT:
        raise UsageError("constraint lists need the ratfunc backend")
    rels = [parse_constraint(c) for c in spec.get("constraints", [])]
    kw = {k: spec[k] for k in ("exponent_range", "doubled") if k in spec}
    return param_from_constraints(n, rels, seed=int(spec.get("seed", 0)), **kw)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})")


# ---------------------------------------------------------------- serialization

def scalar_json(params, x):
    """Exact string for rational and t-backends; order + coefficient strings for cyclotomics."""
    f = params.field
    if f.tag == "cyclotomic":
        return f.to_json(x)
    return f.to_str(f(x))


def scalar_text(params, x):
    return params.field.to_str(params.field(x))


def poly_json(params, p):
    return {
        "text": poly_text(p, lambda c: scalar_text(params, c)),
        "pretty": poly_text(p, lambda c: pretty_scalar(params, c)) if params.free else None,
        "terms": [["*".join(f"x{i}" for i in w) or "1", scalar_json(params, c)] for w, c in p.sorted_terms()],
    }


def word_text(w):
    return "*".join(f"x{i}" for i in w) or "1"


def parse_degree(text, n):
    try:
        d = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise UsageError(f"bad multidegree {text!r}")
    if len(d) != n or min(d) < 0:
        raise UsageError(f"multidegree {text!r} must have {n} nonnegative entries")
    return d


# ---------------------------------------------------------------- commands

class Obstruction(Exception):
    def __init__(self, result):
        super().__init__("obstruction")
        self.result = result


def cmd_constants(a, p):
    d = parse_degree(a.degree, p.n)
    basis = find_constants(d, p).basis
    return {"multidegree": list(d), "dimension": len(basis), "basis": [poly_json(p, c) for c in basis]}


def cmd_sform(a, p):
    d = parse_degree(a.degree, p.n)
    g = s_gram(d, p)
    out = {"multidegree": list(d), "words": [word_text(w) for w in g.words],
           "matrix": [[scalar_json(p, x) for x in row] for row in g.matrix]}
    if a.x and a.y:
        out["value"] = scalar_json(p, s_form(parse_expression(a.x, p), parse_expression(a.y, p), p))
    return out


def cmd_ideal(a, p):
    d = parse_degree(a.degree, p.n)
    sl = ideal_slice(d, p, cross_check=a.cross_check)
    return {"multidegree": list(d), "dimension": sl.dim, "basis": [poly_json(p, b) for b in sl.basis],
            "cross_checked": bool(a.cross_check)}


def cmd_quotient(a, p):
    d = parse_degree(a.degree, p.n)
    qb = quotient_basis(d, p)
    out = {"multidegree": list(d), "dimension": qb.dim, "words": [word_text(w) for w in qb.words]}
    if a.expr:
        out["normal_form"] = poly_json(p, normal_form(parse_expression(a.expr, p), p))
    return out


def cmd_taylor(a, p):
    coeffs = taylor_coefficients(p, a.max_degree)
    out = {"max_degree": a.max_degree,
           "coefficients": [{"word": [*w], "operator": "*".join(f"d{i}" for i in w) or "1",
                             "value": poly_json(p, v)} for w, v in sorted(coeffs.table.items(),
                                                                          key=lambda kv: (len(kv[0]), kv[0]))],
           "gauge": coeffs.gauge_log}
    if a.expr:
        rec = taylor_reconstruct(parse_expression(a.expr, p), p, coeffs)
        out["reconstruction"] = {"constant_term": poly_json(p, rec.constant_term), "ok": rec.ok}
    return out


def cmd_integrate(a, p):
    spec = _read_json(a.one_form)
    comps = spec.get("components")
    if not isinstance(comps, list) or len(comps) != p.n:
        raise UsageError(f"one-form needs {p.n} components")
    y = OneForm(tuple(parse_expression(str(c), p) for c in comps))
    d = parse_degree(spec["degree"], p.n) if "degree" in spec else infer_degree(y)
    if d is None:
        return {"solution": poly_json(p, FreePoly(p.n)), "unique": False}
    res = solve_gradient(y, d, p)
    if res.ok:
        return {"multidegree": list(d), "solution": poly_json(p, res.solution), "unique": res.unique}
    raise Obstruction({"multidegree": list(d), "solution": None,
                       "obstructions": [{"constant": poly_json(p, c), "value": poly_json(p, v)}
                                        for c, v in res.obstructions]})


def _cartan_from_file(path):
    spec = _read_json(path)
    if "type" in spec:
        return km.cartan_type(spec["type"], int(spec["rank"])), spec
    if "matrix" in spec:
        return km.CartanData.from_matrix(spec["matrix"]), spec
    if "k" in spec:
        n = int(spec["N"])
        k = {(i, j): 1 for i in range(1, n + 1) for j in range(1, n + 1) if i != j}
        for key, v in spec["k"].items():
            i, j = (int(s) for s in key.split(","))
            k[(i, j)] = int(v)
        return km.CartanData(n, k), spec
    raise UsageError("Cartan file needs 'type'/'rank', 'matrix' or 'N'/'k'")


def cmd_serre(a, p_unused):
    cd, spec = _cartan_from_file(a.cartan)
    p = km.cartan_constraints(cd, seed=int(spec.get("seed", 0)))
    rows = []
    from .constants import is_constant
    from .qstructure import hat_map, operator_is_zero
    for i in range(1, cd.n + 1):
        for j in range(1, cd.n + 1):
            if i == j:
                continue
            c = km.serre_constant(i, j, cd.k[(i, j)], p)
            rows.append({"i": i, "j": j, "k": cd.k[(i, j)], "element": poly_json(p, c),
                         "is_constant": is_constant(c, p),
                         "operator_vanishes": operator_is_zero(hat_map(c), p)})
    inferred = km.infer_cartan(p)
    return _with_params(p, {"cartan_matrix": cd.matrix(),
                            "inferred_matrix": inferred.matrix() if inferred else None,
                            "serre": rows})


def cmd_rootvectors(a, p_unused):
    kind = a.type.upper()
    cd = km.cartan_type(kind, a.rank)
    p = km.cartan_constraints(cd, seed=a.seed)
    if kind == "A":
        seq = km.build_root_vectors_A(a.rank, p)
        rep = km.verify_A(seq, p)
    elif kind == "C":
        seq = km.build_root_vectors_C(a.rank, p)
        rep = km.verify_C(seq, p)
    else:
        raise UsageError("root-vector towers exist for types A and C")
    return _with_params(p, {
        "type": kind, "rank": a.rank,
        "vectors": [{"index": k, "value": poly_json(p, v)} for k, v in sorted(seq.vectors.items()) if k],
        "coefficients": [{"name": f"{name}_{idx}", "value": scalar_json(p, v)}
                         for (name, idx), v in sorted(seq.coefficients.items())],
        "checks": [{"name": c.name, "ok": c.ok} for c in rep.checks],
        "ok": rep.ok})


def cmd_b2(a, p_unused):
    p = km.cartan_constraints(km.cartan_type("B", 2), seed=a.seed)
    res = km.solve_b2(p, bound=a.bound)
    return _with_params(p, {
        "constant": poly_json(p, res.constant),
        "candidates": [{"E": poly_json(p, e), "a2": scalar_json(p, a2), "a2_monomial": lab}
                       for e, a2, lab in res.candidates],
        "characteristic_polynomial_degree": len(res.char_poly) - 1,
        "all_roots_found": res.complete,
        "survivors": [{"E": poly_json(p, e), "a1": scalar_json(p, a1), "a2": scalar_json(p, a2),
                       "a1_pretty": pretty_scalar(p, a1), "a2_pretty": pretty_scalar(p, a2)}
                      for e, a1, a2 in res.survivors]})


def cmd_b3(a, p_unused):
    p = km.cartan_constraints(km.cartan_type("B", 3), seed=a.seed)
    res = km.search_b3(p, exponent_bound=a.bound)
    return _with_params(p, {
        "bound": a.bound,
        "prefilter_survivors": {str(i): [lab for _, lab in v] for i, v in res.candidates.items()},
        "exact_candidates": {str(i): [{"a": lab, "kernel_dim": k} for _, lab, k in v]
                             for i, v in res.exact.items()},
        "solutions": [{"a": list(lab), "dimension": dim, "qualifies": q} for lab, dim, q in res.solutions],
        "qualifying": len(res.qualifying),
        "notes": res.notes})


def cmd_classify3(a, p):
    rep = cl.classify_order3(p)
    return {"case": rep.case, "constants": [poly_json(p, c) for c in rep.constants],
            "num_constants": len(rep.constants), "ideal_dim": rep.ideal_dim,
            "quotient_dim": rep.quotient_dim, "sigma_factors": rep.factors,
            "expected": list(rep.expected), "matches_table": rep.matches_table}


def cmd_dim_multilinear(a, p):
    if p is None:
        p = cl.multilinear_point(a.n)
    dim = cl.dim_constants_multilinear(a.n, p)
    try:
        pred = cl.predict_dim_multilinear(a.n, p)
        hyp = None
    except cl.HypothesisError as exc:
        pred, hyp = None, str(exc)
    return _with_params(p, {"n": a.n, "dimension": dim, "predicted": pred, "hypothesis_violation": hyp,
                            "agree": pred is not None and pred == dim})


def cmd_verify(a, p_unused):
    keys = [k for k, _, _ in acceptance.CRITERIA] if a.suite == "all" else [a.suite]
    results = []
    for k in keys:
        try:
            r = acceptance.run_criterion(k)
        except KeyError:
            raise UsageError(f"unknown suite {a.suite!r}")
        print(r.line(), file=sys.stderr)
        results.append({"suite": r.key, "title": r.title, "ok": r.ok, "details": r.details})
    out = {"suites": results, "ok": all(r["ok"] for r in results)}
    if not out["ok"]:
        raise Obstruction(out)
    return out


def _with_params(p, result):
    return {"__params__": p, **result}


COMMANDS = {
    "constants": (cmd_constants, True), "sform": (cmd_sform, True), "ideal": (cmd_ideal, True),
    "quotient": (cmd_quotient, True), "taylor": (cmd_taylor, True), "integrate": (cmd_integrate, True),
    "serre": (cmd_serre, False), "rootvectors": (cmd_rootvectors, False), "b2": (cmd_b2, False),
    "b3": (cmd_b3, False), "classify3": (cmd_classify3, True),
    "dim-multilinear": (cmd_dim_multilinear, None), "verify": (cmd_verify, False),
}


def build_parser():
    ap = argparse.ArgumentParser(prog="qdiff", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_, params=True):
        sp = sub.add_parser(name, help=help_)
        if params is not False:
            sp.add_argument("--params", required=params is True, help="parameter file (JSON)")
        return sp
    for name, h in (("constants", "basis of constants on a block"), ("sform", "Gram matrix of S"),
                    ("ideal", "ideal slice on a block"), ("quotient", "quotient basis on a block")):
        sp = add(name, h)
        sp.add_argument("--degree", required=True, help="multidegree d1,d2,...")
        if name == "sform":
            sp.add_argument("--x")
            sp.add_argument("--y")
        if name == "ideal":
            sp.add_argument("--cross-check", action="store_true")
        if name == "quotient":
            sp.add_argument("--expr")
    sp = add("taylor", "Taylor coefficients")
    sp.add_argument("--max-degree", type=int, default=3)
    sp.add_argument("--expr")
    sp = add("integrate", "solve d_i x = y_i")
    sp.add_argument("--one-form", required=True, help="JSON with 'components' and optional 'degree'")
    sp = add("serre", "Serre elements of a Cartan matrix", params=False)
    sp.add_argument("--cartan", required=True)
    sp = add("rootvectors", "root-vector tower and its relations", params=False)
    sp.add_argument("--type", required=True, choices=["A", "C", "a", "c"])
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("b2", "highest root element for B2", params=False)
    sp.add_argument("--bound", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("b3", "grid search for B3", params=False)
    sp.add_argument("--bound", type=int, default=6)
    sp.add_argument("--seed", type=int, default=0)
    add("classify3", "order-3 classification")
    sp = add("dim-multilinear", "constants on the multilinear block", params=None)
    sp.add_argument("--n", type=int, required=True)
    sp = add("verify", "run an acceptance suite", params=False)
    sp.add_argument("--suite", required=True, help="suite name or 'all'")
    return ap


def run_command(argv):
    """(exit code, JSON payload or None)."""
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return (1 if exc.code else 0), None
    fn, needs = COMMANDS[a.command]
    code = 0
    try:
        p = None
        if needs is not False and getattr(a, "params", None):
            p = load_params(_read_json(a.params))
        try:
            result = fn(a, p)
        except Obstruction as ob:
            result, code = ob.result, 2
    except (UsageError, ConstraintError, BackendMismatch, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1, None
    except ConsistencyError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 2, None
    if isinstance(result, dict) and "__params__" in result:
        p = result.pop("__params__")
    payload = {"schema": SCHEMA, "command": a.command,
               "params": p.describe() if p is not None else None, "result": result}
    return code, payload


def main(argv=None):
    code, payload = run_command(sys.argv[1:] if argv is None else argv)
    if payload is not None:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
