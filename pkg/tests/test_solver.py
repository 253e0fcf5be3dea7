import itertools
import stat
import sys
import textwrap

import pytest
from hypothesis import given, settings, strategies as st

from nfainfer.cnf import Cnf, evaluate
from nfainfer.encode import encode_prefix_k
from nfainfer.solver import (
    UNSAT, Budget, Sat, Unknown, Unsatisfiable, format_outcome, main, solve, solve_embedded, solve_external,
)

EMBEDDED_CMD = f"{sys.executable} -m nfainfer.solver"


def make_cnf(n, clauses):
    c = Cnf(num_vars=n)
    for cl in clauses:
        c.add(cl)
    return c


def brute_sat(cnf):
    return any(evaluate(cnf, [False, *bits]) for bits in itertools.product([False, True], repeat=cnf.num_vars))


def test_unit_propagation():
    out = solve_embedded(make_cnf(2, [(1,), (-1, 2)]))
    assert isinstance(out, Sat) and out.assignment[1:] == [True, True]


def test_contradiction():
    assert solve_embedded(make_cnf(1, [(1,), (-1,)])) == UNSAT


def test_empty_instance():
    assert isinstance(solve_embedded(Cnf()), Sat)


def test_pigeonhole_unsat():
    # 4 pigeons, 3 holes
    var = lambda p, h: 3 * p + h + 1
    clauses = [tuple(var(p, h) for h in range(3)) for p in range(4)]
    clauses += [(-var(p, h), -var(q, h)) for h in range(3) for p in range(4) for q in range(p + 1, 4)]
    assert solve_embedded(make_cnf(12, clauses)) == UNSAT


def test_example_prefix_instances(ex1):
    statuses = [solve_embedded(encode_prefix_k(ex1, k).cnf).status for k in (1, 2, 3)]
    assert statuses == ["UNSAT", "UNSAT", "SAT"]


def test_zero_budget():
    cnf = make_cnf(1, [(1,)])
    assert solve_embedded(cnf, Budget(wall_time=0)) == Unknown("timeout")
    assert solve_embedded(cnf, Budget(conflicts=0)) == Unknown("timeout")
    assert solve_external(cnf, Budget(wall_time=0), EMBEDDED_CMD) == Unknown("timeout")


def test_budget_validation():
    with pytest.raises(ValueError):
        Budget(wall_time=-1)


def test_conflict_budget_runs_out():
    var = lambda p, h: 6 * p + h + 1
    clauses = [tuple(var(p, h) for h in range(6)) for p in range(7)]
    clauses += [(-var(p, h), -var(q, h)) for h in range(6) for p in range(7) for q in range(p + 1, 7)]
    assert solve_embedded(make_cnf(42, clauses), Budget(conflicts=5)).status == "UNKNOWN"


clause_st = st.lists(st.integers(1, 7).flatmap(lambda v: st.sampled_from([v, -v])), min_size=1, max_size=3,
                     unique_by=abs)


@settings(max_examples=200)
@given(st.lists(clause_st, max_size=30))
def test_agrees_with_brute_force(clauses):
    cnf = make_cnf(7, clauses)
    out = solve_embedded(cnf)
    assert isinstance(out, Sat) == brute_sat(cnf)
    if isinstance(out, Sat):
        assert evaluate(cnf, out.assignment)


def test_format_outcome():
    assert format_outcome(UNSAT) == "s UNSATISFIABLE\n"
    assert format_outcome(Sat([False, True, False])) == "s SATISFIABLE\nv 1 -2 0\n"
    assert format_outcome(Unknown("timeout")) == "s UNKNOWN\n"


def test_module_entry_point(tmp_path, capsys):
    path = tmp_path / "f.cnf"
    path.write_text("p cnf 2 2\n1 0\n-1 2 0\n")
    assert main([str(path)]) == 10
    assert "v 1 2 0" in capsys.readouterr().out
    path.write_text("p cnf 1 2\n1 0\n-1 0\n")
    assert main([str(path)]) == 20
    assert main([]) == 2


def script(tmp_path, body):
    path = tmp_path / "fake_solver.py"
    path.write_text(textwrap.dedent(body))
    path.chmod(path.stat().st_mode | stat.S_IXUSR)
    return f"{sys.executable} {path}"


def test_external_roundtrip(ex1):
    for k, expected in [(2, Unsatisfiable), (3, Sat)]:
        cnf = encode_prefix_k(ex1, k).cnf
        assert isinstance(solve_external(cnf, Budget(30), EMBEDDED_CMD), expected)
        assert isinstance(solve(cnf, Budget(30), EMBEDDED_CMD), expected)


def test_external_missing_command():
    out = solve_external(make_cnf(1, [(1,)]), Budget(5), "/nonexistent/solver-binary")
    assert isinstance(out, Unknown) and out.reason.startswith("external failure")


def test_external_garbage(tmp_path):
    cmd = script(tmp_path, "print('hello there')\n")
    out = solve_external(make_cnf(1, [(1,), (-1,)]), Budget(5), cmd)
    assert isinstance(out, Unknown) and "external failure" in out.reason


def test_external_lying_solver(tmp_path):
    cmd = script(tmp_path, "print('s SATISFIABLE'); print('v 1 0')\n")
    out = solve_external(make_cnf(1, [(-1,)]), Budget(5), cmd)
    assert isinstance(out, Unknown)


def test_external_timeout(tmp_path):
    cmd = script(tmp_path, "import time; time.sleep(10)\n")
    assert solve_external(make_cnf(1, [(1,)]), Budget(0.5), cmd) == Unknown("timeout")


GLUCOSE_WRAPPER = """
import sys
from pysat.formula import CNF
from pysat.solvers import Glucose4

f = CNF(from_file=sys.argv[1])
with Glucose4(bootstrap_with=f.clauses) as s:
    if s.solve():
        print("s SATISFIABLE")
        print("v " + " ".join(map(str, s.get_model())) + " 0")
    else:
        print("s UNSATISFIABLE")
"""


@settings(max_examples=25, deadline=None)
@given(st.lists(clause_st, max_size=30))
def test_embedded_agrees_with_glucose(tmp_path_factory, clauses):
    pytest.importorskip("pysat")
    cmd = script(tmp_path_factory.mktemp("glucose"), GLUCOSE_WRAPPER)
    cnf = make_cnf(7, clauses)
    assert solve_embedded(cnf).status == solve_external(cnf, Budget(30), cmd).status
