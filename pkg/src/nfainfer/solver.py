"""Satisfiability backends with a time budget.

``solve_embedded`` is a small CDCL solver (two watched literals, first-UIP
learning, non-chronological backjumping). Branching is static: most frequent
variable first, tried true first. ``solve_external`` runs any solver that
reads a DIMACS file path and answers with ``s``/``v`` lines.

Run ``python -m nfainfer.solver FILE.cnf`` to use the embedded solver as such
an external command.
"""
from __future__ import annotations

import os
import shlex
import subprocess
import sys
import tempfile
import time
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .cnf import Cnf, CnfError, Unsat, evaluate, parse_dimacs, parse_dimacs_result, to_dimacs

CHECK_EVERY = 2048


@dataclass(frozen=True)
class Budget:
    wall_time: float | None = None      # seconds; None = unlimited
    conflicts: int | None = None

    def __post_init__(self):
        if self.wall_time is not None and self.wall_time < 0:
            raise ValueError("wall_time must be >= 0")
        if self.conflicts is not None and self.conflicts < 0:
            raise ValueError("conflicts must be >= 0")


@dataclass(frozen=True)
class Sat:
    assignment: list[bool]  # index 0 unused

    status = "SAT"


@dataclass(frozen=True)
class Unsatisfiable:
    status = "UNSAT"


@dataclass(frozen=True)
class Unknown:
    reason: str  # "timeout" or "external failure: ..."

    status = "UNKNOWN"


SolveOutcome = Sat | Unsatisfiable | Unknown
UNSAT = Unsatisfiable()


class _Timeout(Exception):
    pass


class _Cdcl:
    def __init__(self, num_vars: int, clauses: Sequence[Sequence[int]]):
        self.n = num_vars
        self.clauses: list[list[int]] = []
        self.watches: list[list[int]] = [[] for _ in range(2 * num_vars + 2)]
        self.value = [0] * (num_vars + 1)  # 1 true, -1 false, 0 unassigned
        self.level = [0] * (num_vars + 1)
        self.reason: list[int | None] = [None] * (num_vars + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.units: list[int] = []
        self.empty = False
        occ = Counter()
        for c in clauses:
            lits = list(dict.fromkeys(c))
            if any(-x in lits for x in lits):
                continue
            occ.update(abs(x) for x in lits)
            if not lits:
                self.empty = True
            elif len(lits) == 1:
                self.units.append(lits[0])
            else:
                self._attach(lits)
        self.order = sorted(range(1, num_vars + 1), key=lambda v: (-occ[v], v))
        self.next_pick = 0
        self.propagations = 0
        self.conflicts = 0

    @staticmethod
    def _idx(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _attach(self, lits: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[self._idx(lits[0])].append(ci)
        self.watches[self._idx(lits[1])].append(ci)
        return ci

    def _val(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int, reason: int | None) -> bool:
        cur = self._val(lit)
        if cur:
            return cur > 0
        var = abs(lit)
        self.value[var] = 1 if lit > 0 else -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(lit)
        return True

    def _propagate(self, deadline: float | None) -> int | None:
        """Unit propagation; returns a conflicting clause index or None."""
        value, clauses, watches, idx = self.value, self.clauses, self.watches, self._idx
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            if deadline is not None and self.propagations % CHECK_EVERY == 0 and time.monotonic() > deadline:
                raise _Timeout
            false_lit = -p
            ws = watches[idx(false_lit)]
            keep = []
            conflict = None
            i = 0
            while i < len(ws):
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value[abs(first)]
                if (fv if first > 0 else -fv) > 0:
                    keep.append(ci)
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    lv = value[abs(lk)]
                    if (lv if lk > 0 else -lv) >= 0:
                        c[1], c[k] = lk, false_lit
                        watches[idx(lk)].append(ci)
                        break
                else:
                    keep.append(ci)
                    if (fv if first > 0 else -fv) < 0:
                        conflict = ci
                        keep.extend(ws[i:])
                        break
                    self._enqueue(first, ci)
            watches[idx(false_lit)] = keep
            if conflict is not None:
                self.qhead = len(self.trail)
                return conflict
        return None

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        seen = set()
        learnt = [0]
        counter = 0
        p = None
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        while True:
            c = self.clauses[confl]
            for q in (c if p is None else c[1:]):
                v = abs(q)
                if v not in seen and self.level[v] > 0:
                    seen.add(v)
                    if self.level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            confl = self.reason[abs(p)]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda t: self.level[abs(learnt[t])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _backjump(self, level: int):
        if len(self.trail_lim) <= level:
            return
        start = self.trail_lim[level]
        for lit in self.trail[start:]:
            var = abs(lit)
            self.value[var] = 0
            self.reason[var] = None
        del self.trail[start:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)
        self.next_pick = 0

    def _pick(self) -> int | None:
        order, value = self.order, self.value
        while self.next_pick < len(order):
            v = order[self.next_pick]
            if not value[v]:
                return v
            self.next_pick += 1
        return None

    def solve(self, budget: Budget) -> SolveOutcome:
        deadline = None if budget.wall_time is None else time.monotonic() + budget.wall_time
        if budget.wall_time == 0 or budget.conflicts == 0:
            return Unknown("timeout")
        if self.empty:
            return UNSAT
        for u in self.units:
            if not self._enqueue(u, None):
                return UNSAT
        try:
            if self._propagate(deadline) is not None:
                return UNSAT
            while True:
                var = self._pick()
                if var is None:
                    return Sat([False] + [x > 0 for x in self.value[1:]])
                self.trail_lim.append(len(self.trail))
                self._enqueue(var, None)
                while (confl := self._propagate(deadline)) is not None:
                    if not self.trail_lim:
                        return UNSAT
                    self.conflicts += 1
                    if budget.conflicts is not None and self.conflicts >= budget.conflicts:
                        return Unknown("timeout")
                    if deadline is not None and time.monotonic() > deadline:
                        return Unknown("timeout")
                    learnt, back = self._analyze(confl)
                    self._backjump(back)
                    if len(learnt) == 1:
                        self._enqueue(learnt[0], None)
                    else:
                        self._enqueue(learnt[0], self._attach(learnt))
        except _Timeout:
            return Unknown("timeout")


def solve_embedded(cnf: Cnf, budget: Budget = Budget()) -> SolveOutcome:
    out = _Cdcl(cnf.num_vars, cnf.clauses).solve(budget)
    if isinstance(out, Sat) and not evaluate(cnf, out.assignment):
        raise AssertionError("embedded solver produced a non-model")
    return out


def solve_external(cnf: Cnf, budget: Budget, solver_command: str | Sequence[str]) -> SolveOutcome:
    """Run an external DIMACS solver; any failure becomes ``Unknown``."""
    argv = shlex.split(solver_command) if isinstance(solver_command, str) else list(solver_command)
    if budget.wall_time == 0:
        return Unknown("timeout")
    fd, path = tempfile.mkstemp(suffix=".cnf")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(to_dimacs(cnf))
        try:
            proc = subprocess.run(argv + [path], capture_output=True, text=True, timeout=budget.wall_time)
        except subprocess.TimeoutExpired:
            return Unknown("timeout")
        except OSError as exc:
            return Unknown(f"external failure: {exc}")
        try:
            result = parse_dimacs_result(proc.stdout, cnf.num_vars)
        except CnfError as exc:
            return Unknown(f"external failure: {exc}")
        if isinstance(result, Unsat):
            return UNSAT
        if not evaluate(cnf, result):
            return Unknown("external failure: reported assignment does not satisfy the instance")
        return Sat(result)
    finally:
        os.unlink(path)


def solve(cnf: Cnf, budget: Budget = Budget(), solver_command: str | None = None) -> SolveOutcome:
    if solver_command:
        return solve_external(cnf, budget, solver_command)
    return solve_embedded(cnf, budget)


def format_outcome(out: SolveOutcome) -> str:
    """SAT-competition style answer."""
    if isinstance(out, Sat):
        lits = [str(v if val else -v) for v, val in enumerate(out.assignment) if v]
        return "s SATISFIABLE\nv " + " ".join(lits + ["0"]) + "\n"
    if isinstance(out, Unsatisfiable):
        return "s UNSATISFIABLE\n"
    return "s UNKNOWN\n"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m nfainfer.solver FILE.cnf", file=sys.stderr)
        return 2
    with open(argv[0]) as fh:
        cnf = parse_dimacs(fh.read())
    out = solve_embedded(cnf)
    sys.stdout.write(format_outcome(out))
    return {"SAT": 10, "UNSAT": 20}.get(out.status, 0)


if __name__ == "__main__":
    sys.exit(main())
