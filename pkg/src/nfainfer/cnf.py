"""Clause database with named variables, DIMACS I/O and assignment checks.

Literals are DIMACS integers: ``v`` or ``-v`` for a variable index ``v >= 1``.
Every variable is allocated for a *semantic variable* (a transition, a final
flag, a path variable or an anonymous auxiliary) so models can be decoded.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import astuple, dataclass, field
from typing import Iterable, Sequence, Union

from .sample import EPS_TOKEN, Word

Lit = int
Clause = tuple[Lit, ...]


@dataclass(frozen=True)
class Delta:
    a: int
    i: int
    j: int


@dataclass(frozen=True)
class Final:
    i: int


@dataclass(frozen=True)
class PFinal:
    """Candidate final state of the smaller automaton hidden in a (k+1)-state model."""
    i: int


@dataclass(frozen=True)
class PathP:
    """Some path for the (non-empty) prefix ``w`` leads from state 1 to state ``i``."""
    w: Word
    i: int


@dataclass(frozen=True)
class PathS:
    """Some path for the (non-empty) suffix ``w`` leads from state ``i`` to state ``j``."""
    w: Word
    i: int
    j: int


@dataclass(frozen=True)
class Aux:
    n: int


SemVar = Union[Delta, Final, PFinal, PathP, PathS, Aux]

KIND_NAMES = {Delta: "delta", Final: "final", PFinal: "pfinal", PathP: "pathp", PathS: "paths", Aux: "aux"}


class CnfError(ValueError):
    pass


@dataclass
class Cnf:
    num_vars: int = 0
    clauses: list[Clause] = field(default_factory=list)
    varmap: dict[SemVar, int] = field(default_factory=dict)
    groups: list[str] = field(default_factory=list)  # parallel to clauses
    _aux_count: int = 0

    def new_var(self, semvar: SemVar) -> int:
        if semvar in self.varmap:
            raise CnfError(f"{semvar!r} already allocated")
        self.num_vars += 1
        self.varmap[semvar] = self.num_vars
        return self.num_vars

    def aux(self) -> int:
        self._aux_count += 1
        return self.new_var(Aux(self._aux_count))

    def var(self, semvar: SemVar) -> int:
        return self.varmap[semvar]

    def add(self, clause: Iterable[Lit], group: str = "") -> None:
        clause = tuple(clause)
        if not clause:
            raise CnfError("empty clause")
        for lit in clause:
            if lit == 0 or abs(lit) > self.num_vars:
                raise CnfError(f"literal {lit} outside 1..{self.num_vars}")
            if -lit in clause:
                raise CnfError(f"clause {clause} contains {lit} and its negation")
        self.clauses.append(clause)
        self.groups.append(group)

    def add_and(self, parts: Sequence[Lit], group: str = "") -> Lit:
        """Fresh auxiliary y with y <-> conjunction of ``parts``."""
        y = self.aux()
        for p in parts:
            self.add((-y, p), group)
        self.add((y,) + tuple(-p for p in parts), group)
        return y

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def group_counts(self) -> Counter:
        return Counter(self.groups)

    def var_counts(self) -> Counter:
        return Counter(KIND_NAMES[type(s)] for s in self.varmap)

    def names(self) -> dict[int, SemVar]:
        return {v: s for s, v in self.varmap.items()}


def new_var(pool: Cnf, semvar: SemVar) -> int:
    return pool.new_var(semvar)


def add_iff_or_of_pairs(cnf: Cnf, x: Lit, pairs: Sequence[tuple[Lit, Lit]], group: str = "") -> list[int]:
    """Encode x <-> OR_l (a_l AND b_l) with one auxiliary per pair.

    Emits 4m + 1 clauses for m pairs and returns the auxiliaries.
    """
    if not pairs:
        raise CnfError("add_iff_or_of_pairs needs at least one pair")
    ys = [cnf.add_and((a, b), group) for a, b in pairs]
    cnf.add((-x, *ys), group)
    for y in ys:
        cnf.add((x, -y), group)
    return ys


def evaluate(cnf: Cnf | Sequence[Clause], assignment: Sequence[bool]) -> bool:
    """True iff every clause has a true literal; ``assignment[v]`` is variable v (index 0 unused)."""
    clauses = cnf.clauses if isinstance(cnf, Cnf) else cnf
    for clause in clauses:
        if not any(assignment[lit] if lit > 0 else not assignment[-lit] for lit in clause):
            return False
    return True


eval_cnf = evaluate


def to_dimacs(cnf: Cnf) -> str:
    out = [f"p cnf {cnf.num_vars} {cnf.num_clauses}\n"]
    out.extend(" ".join(map(str, c)) + " 0\n" for c in cnf.clauses)
    return "".join(out)


def parse_dimacs(text: str) -> Cnf:
    cnf = None
    pending: list[int] = []
    declared = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: bad problem line {line!r}")
            cnf = Cnf(num_vars=int(parts[2]))
            declared = int(parts[3])
            continue
        if cnf is None:
            raise CnfError(f"line {lineno}: clause before problem line")
        try:
            nums = [int(x) for x in line.split()]
        except ValueError:
            raise CnfError(f"line {lineno}: non-integer token") from None
        for x in nums:
            if x == 0:
                cnf.add(pending)
                pending = []
            else:
                pending.append(x)
    if cnf is None:
        raise CnfError("missing problem line")
    if pending:
        cnf.add(pending)
    if cnf.num_clauses != declared:
        raise CnfError(f"problem line declares {declared} clauses, found {cnf.num_clauses}")
    return cnf


class Unsat:
    """Marker returned by :func:`parse_dimacs_result` for an UNSATISFIABLE answer."""

    def __repr__(self):
        return "UNSAT"


UNSAT = Unsat()


def parse_dimacs_result(text: str, num_vars: int | None = None) -> list[bool] | Unsat:
    """Read SAT-competition output (``s`` and ``v`` lines).

    Variables missing from the ``v`` lines are set false. Raises CnfError
    on anything that is not a definite SAT/UNSAT answer.
    """
    status = None
    lits: list[int] = []
    terminated = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("s "):
            word = line[2:].strip()
            if word not in ("SATISFIABLE", "UNSATISFIABLE"):
                raise CnfError(f"undecided status {word!r}")
            if status is not None and status != word:
                raise CnfError("conflicting status lines")
            status = word
        elif line.startswith("v"):
            try:
                for tok in line[1:].split():
                    x = int(tok)
                    if x == 0:
                        terminated = True
                    else:
                        lits.append(x)
            except ValueError:
                raise CnfError(f"bad value line {line!r}") from None
        else:
            raise CnfError(f"unexpected line {line!r}")
    if status is None:
        raise CnfError("no status line")
    if status == "UNSATISFIABLE":
        return UNSAT
    if not terminated and lits:
        raise CnfError("value lines not terminated by 0")
    top = max([abs(x) for x in lits], default=0)
    n = max(top, num_vars or 0)
    values = [False] * (n + 1)
    for x in lits:
        values[abs(x)] = x > 0
    return values


def render_varmap(cnf: Cnf, letters: str, header: Iterable[str] = ()) -> str:
    """Sidecar map ``<kind> <args...> -> <index>``, one variable per line."""
    def word(w):
        return "".join(letters[a] for a in w) or EPS_TOKEN

    lines = [f"# {h}" for h in header]
    for sem, v in sorted(cnf.varmap.items(), key=lambda kv: kv[1]):
        kind = KIND_NAMES[type(sem)]
        if isinstance(sem, Delta):
            args = [letters[sem.a], sem.i, sem.j]
        elif isinstance(sem, (PathP, PathS)):
            args = [word(sem.w), *astuple(sem)[1:]]
        else:
            args = list(astuple(sem))
        lines.append(" ".join([kind, *map(str, args), "->", str(v)]))
    return "\n".join(lines) + "\n"


def _word(tok: str, index: dict[str, int]) -> Word:
    return () if tok == EPS_TOKEN else tuple(index[c] for c in tok)


def parse_varmap(text: str, letters: str) -> tuple[dict[SemVar, int], dict[str, str]]:
    """Inverse of :func:`render_varmap`; also returns ``# key value`` header entries."""
    index = {c: i for i, c in enumerate(letters)}
    out: dict[SemVar, int] = {}
    header: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split(None, 1)
            if parts:
                header[parts[0]] = parts[1].strip() if len(parts) > 1 else ""
            continue
        try:
            lhs, rhs = line.split("->")
            kind, *args = lhs.split()
            v = int(rhs)
            if kind == "delta":
                sem = Delta(index[args[0]], int(args[1]), int(args[2]))
            elif kind == "final":
                sem = Final(int(args[0]))
            elif kind == "pfinal":
                sem = PFinal(int(args[0]))
            elif kind == "pathp":
                sem = PathP(_word(args[0], index), int(args[1]))
            elif kind == "paths":
                sem = PathS(_word(args[0], index), int(args[1]), int(args[2]))
            elif kind == "aux":
                sem = Aux(int(args[0]))
            else:
                raise CnfError(f"line {lineno}: unknown kind {kind!r}")
        except (ValueError, KeyError, IndexError):
            raise CnfError(f"line {lineno}: cannot parse {line!r}") from None
        out[sem] = v
    return out, header
