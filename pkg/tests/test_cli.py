import json
import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from qdiff.acceptance import random_poly, zeta3_point
from qdiff.cli import (ParseError, UsageError, load_params, parse_constraint, parse_expression,
                       poly_json, run_command)
from qdiff.freealg import FreePoly
from qdiff.qstructure import from_table, generic_params
from qdiff.scalars import QQ

ROOT = os.path.dirname(os.path.dirname(__file__))
INPUTS = os.path.join(ROOT, "inputs")
S12 = load_params({"N": 2, "constraints": ["sigma(1,2) = 1"]})


def inp(name):
    return os.path.join(INPUTS, name)


def test_parse_examples():
    x1, x2 = FreePoly.gen(2, 1), FreePoly.gen(2, 2)
    assert parse_expression("x1*x2 - q[2,1]*x2*x1", S12) == x1 * x2 - (x2 * x1).scale(S12.Q[2][1])
    assert parse_expression("x1^3", S12) == FreePoly.word(2, (1, 1, 1))
    p = parse_expression("(1/2)*x1*x2*x1", S12)
    assert p == FreePoly.word(2, (1, 2, 1), QQ(1) / 2) and len(p.terms) == 1
    assert parse_expression(" q[1,1]^-2 * x2 ", S12) == FreePoly.word(2, (2,), S12.Q[1][1] ** -2)


@pytest.mark.parametrize("text,pos", [("x1*(x2 +", 8), ("x1 $ x2", 3), ("x3", 0), ("x1/x2", 3), ("x1 x2", 3)])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as err:
        parse_expression(text, S12)
    assert err.value.pos == pos


POINTS = [S12, generic_params(3), zeta3_point(),
          from_table(2, QQ, {(1, 1): 2, (1, 2): QQ(-3) / 7, (2, 1): 5, (2, 2): QQ(1) / 9})]


@given(st.integers(0, 10 ** 6), st.integers(0, len(POINTS) - 1))
def test_text_roundtrip(seed, k):
    p = POINTS[k]
    x = random_poly(p.n, p, random.Random(seed)).scale(p.Q[1][1] / (1 + p.Q[1][1]))
    rep = poly_json(p, x)
    assert parse_expression(rep["text"], p) == x
    if rep["pretty"] is not None:
        assert parse_expression(rep["pretty"], p) == x


def test_constraint_grammar():
    r = parse_constraint("sigma(1,2) * q[1,1]^2 = 1")
    assert dict(r.powers) == {(1, 1): 2, (1, 2): 1, (2, 1): 1}
    r = parse_constraint("q[1,2] = q[2,2]^3")
    assert dict(r.powers) == {(1, 2): 1, (2, 2): -3}
    r = parse_constraint("q[1,1] = -1")
    assert dict(r.powers) == {(1, 1): 1} and r.coeff == -1
    with pytest.raises(UsageError):
        parse_constraint("sigma(1,2) * q[1,1]")


def test_param_file_variants():
    p = load_params(json.load(open(inp("zeta3.json"))))
    assert p.Q[1][1] ** 3 == 1
    with pytest.raises(UsageError):
        load_params({"N": 2, "backend": "rational", "q": {"1,1": "2"}})
    with pytest.raises(UsageError):
        load_params({"N": 2, "backend": "rational", "constraints": ["sigma(1,2) = 1"]})
    with pytest.raises(UsageError):
        load_params({"N": 1, "backend": "rational", "q": {"1,1": "2"}, "constraints": ["q[1,1] = 3"]})
    again = load_params(S12.describe())
    assert again.Q == S12.Q and len(again.relations) == 1


def test_constants_command():
    code, out = run_command(["constants", "--degree", "1,1", "--params", inp("sigma12.json")])
    assert code == 0 and out["schema"] == 1
    assert out["result"]["dimension"] == 1
    c = parse_expression(out["result"]["basis"][0]["text"], load_params(out["params"]))
    assert c == parse_expression("x1*x2 - q[2,1]*x2*x1", load_params(out["params"]))


def test_integrate_obstruction_exit_code():
    code, out = run_command(["integrate", "--params", inp("sigma12.json"), "--one-form", inp("bad.json")])
    p = load_params(out["params"])
    assert code == 2
    val = parse_expression(out["result"]["obstructions"][0]["value"]["text"], p)
    assert val == FreePoly.scalar(2, -p.Q[2][1])


def test_usage_errors_exit_1(tmp_path):
    assert run_command(["constants", "--degree", "1", "--params", inp("sigma12.json")])[0] == 1
    assert run_command(["constants", "--degree", "1,1", "--params", str(tmp_path / "missing.json")])[0] == 1
    assert run_command(["nonsense"])[0] == 1
    assert run_command(["quotient", "--degree", "1,1", "--params", inp("sigma12.json"), "--expr", "x1*("])[0] == 1


def test_other_commands():
    assert run_command(["classify3", "--params", inp("order3_two_pair.json")])[1]["result"]["matches_table"]
    r = run_command(["dim-multilinear", "--n", "4", "--params", inp("multilinear4.json")])[1]["result"]
    assert r["dimension"] == r["predicted"] == 2
    r = run_command(["serre", "--cartan", inp("cartan_C3.json")])[1]["result"]
    assert all(row["is_constant"] for row in r["serre"])
    assert r["inferred_matrix"] == r["cartan_matrix"]
    assert run_command(["rootvectors", "--type", "A", "--rank", "3"])[1]["result"]["ok"]
    assert len(run_command(["b2"])[1]["result"]["survivors"]) == 1
    code, out = run_command(["taylor", "--params", inp("zeta3.json"), "--max-degree", "4", "--expr", "x1^3"])
    assert code == 0 and out["result"]["reconstruction"]["ok"]
    code, out = run_command(["sform", "--degree", "1,1", "--params", inp("rational2.json")])
    assert out["result"]["matrix"] == [["1/3", "1"], ["1", "3"]]


def test_verify_alias():
    code, out = run_command(["verify", "--suite", "table-4.2.3"])
    assert code == 0 and out["result"]["ok"]
    assert run_command(["verify", "--suite", "nope"])[0] == 1


def test_deterministic_output():
    argv = [sys.executable, "-m", "qdiff", "ideal", "--degree", "2,1", "--params", inp("sigma12.json")]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["result"]["dimension"] == 2
