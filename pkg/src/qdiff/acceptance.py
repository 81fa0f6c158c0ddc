"""Checks shared by the acceptance tests and the ``verify`` command."""
import math
import random
import time
from dataclasses import dataclass, field

from . import classification as cl
from . import kacmoody as km
from .constants import blocks_up_to, generated_slice, ideal_slice, is_constant, s_gram
from .freealg import FreePoly, word_basis
from .qstructure import (Relation, from_table, generic_params, hat_map, operator_is_zero,
                         param_from_constraints, sigma_powers, verify_ef_relations)
from .scalars import CyclotomicField
from .taylor import (Chain, Coboundary, OneForm, RandomCochain, exact_form, hochschild_boundary,
                     is_strongly_closed, single_generator_coefficient, solve_gradient,
                     taylor_closed_form, taylor_coefficients, taylor_reconstruct,
                     taylor_residual_ok)


@dataclass
class CriterionResult:
    key: str
    title: str
    ok: bool
    seconds: float = 0.0
    details: list = field(default_factory=list)

    def line(self):
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.key}: {self.title} ({self.seconds:.1f}s)"


def _timed(key, title, fn):
    t0 = time.time()
    ok, details = fn()
    return CriterionResult(key, title, bool(ok), time.time() - t0, details)


def order3_cases(seed=0):
    """Named parameter points: generic and the constrained order-3 cases (N = 3)."""
    return {case: cl.order3_point(case, seed=seed) for case in cl.TABLE}


def random_poly(n, params, rng, max_degree=4, terms=4, coeff_range=5):
    out = FreePoly(n)
    for _ in range(terms):
        deg = rng.randint(0, max_degree)
        w = tuple(rng.randint(1, n) for _ in range(deg))
        c = rng.randint(-coeff_range, coeff_range)
        if c:
            out = out + FreePoly.word(n, w, params.field(c))
    return out


def random_homogeneous(n, d, params, rng, terms=3, coeff_range=5):
    words = word_basis(d)
    picks = rng.sample(list(words), min(terms, len(words)))
    return FreePoly(n, {w: params.field(rng.randint(1, coeff_range)) for w in picks})


# ---------------------------------------------------------------- 1
def check_multilinear(max_n=5, rational_n=6):
    details = []
    ok = True
    for n in range(3, max_n + 1):
        p = cl.multilinear_point(n)
        dim = cl.dim_constants_multilinear(n, p)
        pred = cl.predict_dim_multilinear(n, p)
        gen = cl.dim_constants_multilinear(n, generic_params(n))
        good = dim == pred == [1, 2, 6, 24][n - 3] and gen == 0
        ok &= good
        details.append(f"n={n}: dim={dim} predicted={pred} generic={gen}")
    if rational_n:
        # larger n at a random rational point, rank by flint over Q
        n = rational_n
        p = cl.multilinear_rational_point(n)
        dim = cl.dim_constants_multilinear_rational(n, p)
        pred = cl.predict_dim_multilinear(n, p)
        gen = cl.dim_constants_multilinear_rational(n, cl.multilinear_rational_point(n, constrained=False))
        ok &= dim == pred == math.factorial(n - 2) and gen == 0
        details.append(f"n={n} (rational point): dim={dim} predicted={pred} generic={gen}")
    return ok, details


# ---------------------------------------------------------------- 2
def check_order3_table():
    details = []
    ok = True
    for case, p in order3_cases().items():
        rep = cl.classify_order3(p)
        ok &= rep.matches_table
        details.append(f"{case}: constants={len(rep.constants)} ideal={rep.ideal_dim} "
                       f"quotient={rep.quotient_dim} expected={rep.expected}")
    return ok, details


def gram_points():
    pts = {"generic N=1": generic_params(1), "generic N=2": generic_params(2)}
    pts.update({f"N=3 {k}": v for k, v in order3_cases().items()})
    return pts


# ---------------------------------------------------------------- 3
def check_gram_symmetry(max_total=4):
    details = []
    ok = True
    for name, p in gram_points().items():
        bad = []
        for d in blocks_up_to(p.n, max_total):
            g = s_gram(d, p).matrix
            if any(g[a][b] != g[b][a] for a in range(len(g)) for b in range(a)):
                bad.append(d)
        ok &= not bad
        details.append(f"{name}: asymmetric blocks {bad}")
    return ok, details


# ---------------------------------------------------------------- 4
def check_slice_cross_check(max_total=4):
    details = []
    ok = True
    for name, p in gram_points().items():
        bad = []
        for d in blocks_up_to(p.n, max_total):
            a, b = ideal_slice(d, p), generated_slice(d, p)
            if a.pivots != b.pivots or any(x != y for x, y in zip(a.rows, b.rows)):
                bad.append(d)
        ok &= not bad
        details.append(f"{name}: mismatched blocks {bad}")
    return ok, details


# ---------------------------------------------------------------- 5
def taylor_points():
    s12 = Relation.make(sigma_powers(1, 2), 1, "sigma(1,2) = 1")
    return {
        "generic N=2": generic_params(2),
        "sigma12 N=2": param_from_constraints(2, [s12]),
        "generic N=3": generic_params(3),
        "sigma123 N=3": cl.order3_point("sigma123"),
    }


def zeta3_point():
    f = CyclotomicField(3)
    return from_table(1, f, {(1, 1): f.zeta}, ["q[1,1] = zeta_3"])


def check_taylor(samples=50, seed=0):
    details = []
    ok = True
    rng = random.Random(seed)
    for name, p in taylor_points().items():
        coeffs = taylor_coefficients(p, 4)
        fails = 0
        for _ in range(samples):
            x = random_poly(p.n, p, rng)
            if not taylor_reconstruct(x, p, coeffs).ok:
                fails += 1
        residual = taylor_residual_ok(taylor_coefficients(p, 3), p)
        ok &= fails == 0 and residual
        details.append(f"{name}: reconstruction failures {fails}/{samples}; recursion residual zero: {residual}")
    p1 = generic_params(1)
    c1 = taylor_coefficients(p1, 5)
    closed = all(c1[(1,) * k] == single_generator_coefficient(k, p1) for k in range(1, 6))
    ok &= closed
    details.append(f"single generator closed form n<=5: {closed}")
    p2 = generic_params(2)
    c2 = taylor_coefficients(p2, 4)
    gen_closed = all(c2[w] == taylor_closed_form(w, p2)
                     for k in range(1, 5) for w in word_basis_total(2, k))
    ok &= gen_closed
    details.append(f"inverse-Gram closed form, N=2 degree<=4: {gen_closed}")
    pz = zeta3_point()
    cz = taylor_coefficients(pz, 4)
    cube = FreePoly.word(1, (1, 1, 1))
    d3_zero = is_constant(cube, pz)
    stops = sorted(cz.table) == [(), (1,), (1, 1)]
    recon = all(taylor_reconstruct(random_poly(1, pz, rng), pz, cz).ok for _ in range(10))
    ok &= d3_zero and stops and recon
    details.append(f"q=zeta3: d1^3 = 0 on xi^3: {d3_zero}; series stops at n=2: {stops}; reconstruction: {recon}")
    return ok, details


def word_basis_total(n, total):
    from .freealg import degrees_of_total
    return [w for d in degrees_of_total(n, total) for w in word_basis(d)]


# ---------------------------------------------------------------- 6
def check_serre():
    details = []
    ok = True
    for n in (2, 3):
        gp = generic_params(n)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                for k in (1, 2, 3):
                    rel = km.serre_relation(i, j, k)
                    p = param_from_constraints(n, [rel])
                    c = km.serre_constant(i, j, k, p)
                    on = is_constant(c, p) and operator_is_zero(hat_map(c), p)
                    off = not is_constant(km.serre_constant(i, j, k, gp), gp)
                    if not (on and off):
                        ok = False
                        details.append(f"N={n} ({i},{j}) k={k}: constrained={on} generic-not-constant={off}")
        details.append(f"N={n}: all pairs, k<=3 checked")
    return ok, details


# ---------------------------------------------------------------- 7
def check_root_vectors():
    details = []
    ok = True
    for kind, ell in (("A", 3), ("A", 4), ("C", 3)):
        p = km.cartan_constraints(km.cartan_type(kind, ell))
        if kind == "A":
            rep = km.verify_A(km.build_root_vectors_A(ell, p), p)
        else:
            rep = km.verify_C(km.build_root_vectors_C(ell, p), p)
        ok &= rep.ok
        details.append(f"{kind}{ell}: {len(rep.checks)} checks, failures {[c.name for c in rep.failures()]}")
    return ok, details


# ---------------------------------------------------------------- 8
def check_b2():
    p = km.cartan_constraints(km.cartan_type("B", 2))
    res = km.solve_b2(p)
    displayed = km.b2_displayed_candidates(p)
    matched = []
    for e, a2, _ in res.candidates:
        matched.append([k for k, (pe, pa) in enumerate(displayed)
                        if pa == a2 and km.proportional(e, pe) not in (None, 0)])
    Q = p.Q
    from .freealg import FreePoly as F
    x1, x2 = F.gen(2, 1), F.gen(2, 2)
    from .qstructure import q_bracket
    c221 = q_bracket(q_bracket(x1, x2, Q[2][1]), x2, Q[2][1] * Q[1][1])
    surv_ok = (len(res.survivors) == 1
               and km.proportional(res.survivors[0][0], c221) not in (None, 0)
               and res.survivors[0][1] == Q[1][2] ** 2 * Q[2][2] ** 2
               and res.survivors[0][2] == Q[2][1] * Q[2][2])
    ok = (len(res.candidates) == 3 and sorted(m[0] for m in matched if len(m) == 1) == [0, 1, 2]
          and surv_ok and res.complete)
    return ok, [f"candidates={len(res.candidates)} matched={matched} complete={res.complete}",
                f"survivors={len(res.survivors)} survivor matches nested bracket: {surv_ok}"]


# ---------------------------------------------------------------- 9
def check_b3(bound=6):
    p3 = km.cartan_constraints(km.cartan_type("B", 3))
    r3 = km.search_b3(p3, exponent_bound=bound)
    p2 = km.cartan_constraints(km.cartan_type("B", 2))
    r2 = km.search_b2_control(p2, exponent_bound=bound)
    b2 = km.solve_b2(p2)
    ctrl = (len(r2.qualifying) == 1 and len(b2.survivors) == 1
            and km.proportional(_solution_poly(r2.qualifying[0][2], (1, 2), 2), b2.survivors[0][0]) not in (None, 0))
    zero = km.zero_scalar_control(p3)
    ok = not r3.qualifying and ctrl and zero
    return ok, [f"B3 solutions={r3.solutions} qualifying={len(r3.qualifying)}",
                f"B3 per-generator exact candidates: { {i: [l for _, l, _ in v] for i, v in r3.exact.items()} }",
                f"B2 control qualifying={len(r2.qualifying)} matches solve_b2: {ctrl}",
                f"zero-scalar control (no E): {zero}"] + r3.notes


def _solution_poly(ker, d, n):
    words = word_basis(d)
    v = ker[0]
    return FreePoly(n, {words[k]: c for k, c in v.items()})


# ---------------------------------------------------------------- 10
def check_four_generator_identity():
    p = cl.four_generator_point()
    total, bad = cl.annihilated_words(cl.four_generator_identity(p), (1, 1, 1, 1), p)
    pd = cl.four_generator_point(doubled=True)
    total2, bad2 = cl.annihilated_words(cl.symmetrized_identity(pd), (1, 1, 1, 1), pd)
    return bad == 0 and bad2 == 0 and total == 24, [
        f"operator identity: {total - bad}/{total} words annihilated",
        f"square-root form: {total2 - bad2}/{total2} words annihilated"]


# ---------------------------------------------------------------- 11
def check_integrability(samples=30, seed=0):
    details = []
    ok = True
    rng = random.Random(seed)
    pts = {"generic N=2": generic_params(2),
           "sigma12 N=2": taylor_points()["sigma12 N=2"],
           "A2 Serre": km.cartan_constraints(km.cartan_type("A", 2)),
           "sigma123 N=3": cl.order3_point("sigma123")}
    for name, p in pts.items():
        n = p.n
        counts = {"exact": 0, "closed-solved": 0, "obstructed": 0}
        for k in range(samples):
            total = rng.randint(2, 3)
            from .freealg import degrees_of_total
            d = rng.choice(list(degrees_of_total(n, total)))
            if k % 2 == 0:
                x = random_homogeneous(n, d, p, rng)
                y = exact_form(x, p)
                sc, _ = is_strongly_closed(y, p, d)
                res = solve_gradient(y, d, p)
                good = sc and res.ok and exact_form(res.solution, p) == y
                counts["exact"] += 1
            else:
                comps = []
                for i in range(1, n + 1):
                    low = tuple(v - (1 if j == i - 1 else 0) for j, v in enumerate(d))
                    comps.append(random_homogeneous(n, low, p, rng, terms=2) if min(low) >= 0 else FreePoly(n))
                y = OneForm(tuple(comps))
                sc, wit = is_strongly_closed(y, p, d)
                res = solve_gradient(y, d, p)
                good = (sc == res.ok) and (res.ok or bool(res.obstructions))
                if res.ok:
                    good &= exact_form(res.solution, p) == y
                    counts["closed-solved"] += 1
                else:
                    counts["obstructed"] += 1
            if not good:
                ok = False
                details.append(f"{name}: failure at sample {k}, block {d}")
        details.append(f"{name}: {counts}")
    p = pts["sigma12 N=2"]
    y = OneForm.of(FreePoly.gen(2, 2), FreePoly(2))
    res = solve_gradient(y, (1, 1), p)
    obs = res.obstructions
    val_ok = (not res.ok and len(obs) == 1 and obs[0][1] == FreePoly.scalar(2, -p.Q[2][1]))
    ok &= val_ok
    details.append(f"obstructed example y=(xi2, 0): reports {[str(v) for _, v in obs]}")
    return ok, details


# ---------------------------------------------------------------- 12
def check_left_right(max_total=4):
    details = []
    ok = True
    for case, p in order3_cases().items():
        bad = []
        for d in blocks_up_to(p.n, max_total):
            a, b = generated_slice(d, p), generated_slice(d, p, right=True)
            if a.pivots != b.pivots or any(x != y for x, y in zip(a.rows, b.rows)):
                bad.append(d)
        ok &= not bad
        details.append(f"{case}: mismatched blocks {bad}")
    return ok, details


# ---------------------------------------------------------------- 13
def random_chain(n, p_len, rng, terms=3, max_word=2, coeff_range=4):
    out = Chain(n)
    for _ in range(terms):
        t = tuple(tuple(rng.randint(1, n) for _ in range(rng.randint(1, max_word))) for _ in range(p_len))
        out = out + Chain(n, {t: rng.randint(1, coeff_range)})
    return out


def check_hochschild(samples=20, seed=0):
    details = []
    ok = True
    rng = random.Random(seed)
    for n in (1, 2, 3):
        p = generic_params(n)
        dd_bad = bb_bad = 0
        for s in range(samples):
            c = random_chain(n, rng.randint(2, 4), rng)
            if hochschild_boundary(hochschild_boundary(c)):
                bb_bad += 1
            tau = RandomCochain(n, p, seed=s)
            c2 = random_chain(n, rng.randint(1, 3), rng, max_word=2)
            if Coboundary(Coboundary(tau, p), p)(c2):
                dd_bad += 1
        ef = verify_ef_relations(p, degree_bound=3)
        ok &= bb_bad == 0 and dd_bad == 0 and ef["ok"]
        details.append(f"N={n}: boundary^2 failures {bb_bad}, d^2 failures {dd_bad}, "
                       f"e/f/K relations {ef['checked']} checked ok={ef['ok']}")
    return ok, details


CRITERIA = [
    ("multilinear", "multilinear constants have dimension (n-2)! for n=3..6, and 0 generically", check_multilinear),
    ("order3-table", "order-3 classification table and quotient dimensions", check_order3_table),
    ("gram-symmetry", "Gram matrix of S symmetric on all blocks |d|<=4", check_gram_symmetry),
    ("slice-cross-check", "radical of S equals the constant-generated slice", check_slice_cross_check),
    ("taylor", "Taylor reconstruction, closed forms and root-of-unity truncation", check_taylor),
    ("serre", "Serre elements are constants exactly on their surfaces; hat image vanishes", check_serre),
    ("rootvectors", "A3, A4, C3 root-vector towers satisfy all bracket relations", check_root_vectors),
    ("b2", "B2: three candidates, one survivor", check_b2),
    ("b3", "B3 grid search finds no qualifying element; B2 control succeeds", check_b3),
    ("four-generator-identity", "four-generator operator identity on block (1,1,1,1)", check_four_generator_identity),
    ("integrability", "strongly closed <=> integrable on generated one-forms", check_integrability),
    ("left-right", "left and right constants generate the same slices", check_left_right),
    ("hochschild", "boundary^2 = 0, d^2 = 0 and e/f/K relations", check_hochschild),
]

SUITE_ALIASES = {"table-4.2.3": "order3-table"}


def run_criterion(key):
    key = SUITE_ALIASES.get(key, key)
    for k, title, fn in CRITERIA:
        if k == key:
            return _timed(k, title, fn)
    raise KeyError(key)


def run_all():
    return [_timed(k, title, fn) for k, title, fn in CRITERIA]
