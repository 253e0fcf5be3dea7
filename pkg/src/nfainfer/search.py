"""Finding the smallest consistent NFA by tightening a pair of bounds.

The driver keeps ``lower <= k_min <= upper`` and a consistent automaton with
``upper`` states (initially the prefix tree acceptor). Each probe asks a SAT
model whether a k-state automaton exists: UNSAT raises ``lower``, SAT lowers
``upper``. For the (k+1)-state models a SAT answer only yields a k-state
automaton once the reduction succeeds; when it does not, the driver asks the
refined model, whose answers are always reducible.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import Future, ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .cnf import render_varmap, to_dimacs
from .encode import Encoding, Model, ModelKind, decode_nfa, encode
from .nfa import Nfa, pta_nfa
from .reduce import Reduced, ReduceError, FailedEmptyCandidates, reduce_kp1, reduce_or_enumerate
from .sample import Sample, pta_size
from .solver import Budget, Sat, solve, Unsatisfiable
from .split import IlsParams, Init, SplitAssignment, best_prefix_split, best_suffix_split, ils_split

FAMILIES = ("prefix", "suffix", "hybrid")
SPLITS = ("ils", "bestpre", "bestsuf")
TABLE_HEADER = "k\tkind\toutcome\tvars\tclauses\tseconds"


@dataclass(frozen=True)
class Strategy:
    family: str = "prefix"
    split: str | None = None        # hybrid only: ils, bestpre or bestsuf
    plus_one: bool = False
    refined: bool = False
    clone_f4: bool = True
    seed: int = 0
    ils_init: Init = Init.RANDOM
    ils_iters: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown model family {self.family!r}")
        if self.family == "hybrid":
            if self.split is None:
                object.__setattr__(self, "split", "ils")
            if self.split not in SPLITS:
                raise ValueError(f"unknown split strategy {self.split!r}")
        elif self.split is not None:
            raise ValueError("a split strategy only applies to the hybrid model")
        if self.refined:
            if self.family != "prefix":
                raise ValueError("the refined model exists only for the prefix family")
            object.__setattr__(self, "plus_one", True)

    @property
    def model(self) -> Model:
        if self.refined:
            return Model.PREFIX_KP1_REFINED
        return Model(f"{self.family}-{'kp1' if self.plus_one else 'k'}")

    @property
    def label(self) -> str:
        out = self.model.value
        if self.split:
            out += f"/{self.split}"
        if self.plus_one and not self.refined and not self.clone_f4:
            out += "/no-clone"
        return out

    def make_split(self, sample: Sample, states: int) -> SplitAssignment:
        if self.split == "bestpre":
            return best_prefix_split(sample)
        if self.split == "bestsuf":
            return best_suffix_split(sample)
        return ils_split(sample, states, IlsParams(self.ils_iters, self.seed, self.ils_init))

    def kind_for(self, sample: Sample, k: int) -> ModelKind:
        split = None
        if self.family == "hybrid":
            split = self.make_split(sample, k + 1 if self.plus_one else k)
        return ModelKind(self.model, split, self.clone_f4)


REFINED = ModelKind(Model.PREFIX_KP1_REFINED)


@dataclass(frozen=True)
class ProbeRecord:
    k: int              # automaton size asked about
    states: int         # states described by the instance (k or k+1)
    kind: str
    outcome: str        # SAT, UNSAT, UNKNOWN or ERROR
    vars: int = 0
    clauses: int = 0
    seconds: float = 0.0
    note: str = ""
    nfa: Nfa | None = field(default=None, compare=False, repr=False)

    def row(self, timings: bool = True) -> str:
        secs = f"{self.seconds:.3f}" if timings else "-"
        return f"{self.k}\t{self.kind}\t{self.outcome}\t{self.vars}\t{self.clauses}\t{secs}"


def probe(sample: Sample, kind: ModelKind, k: int, budget: Budget = Budget(),
          solver_command: str | None = None, dump_dir: str | None = None) -> ProbeRecord:
    """Encode, solve and (on SAT) decode and verify one instance. Never raises.

    With ``dump_dir`` the instance is also written there as DIMACS plus varmap.
    """
    states = k + 1 if kind.model.plus_one else k
    t0 = time.perf_counter()
    nvars = nclauses = 0
    try:
        enc = encode(sample, kind, k)
        nvars, nclauses = enc.cnf.num_vars, enc.cnf.num_clauses
        if dump_dir is not None:
            dump_instance(enc, os.path.join(dump_dir, f"k{k}-{kind.label}"))
        out = solve(enc.cnf, budget, solver_command)
        nfa, note = None, ""
        if isinstance(out, Sat):
            nfa = decode_nfa(enc, out.assignment, sample)
        elif not isinstance(out, Unsatisfiable):
            note = out.reason
        status = out.status
    except Exception as exc:  # reported in the row
        status, nfa, note = "ERROR", None, f"{type(exc).__name__}: {exc}"
    return ProbeRecord(k, states, kind.label, status, nvars, nclauses, time.perf_counter() - t0, note, nfa)


def varmap_header(enc: Encoding) -> list[str]:
    return [f"model {enc.kind.label}", f"alphabet {enc.alphabet}", f"k {enc.k}", f"states {enc.k_target}"]


def dump_instance(enc: Encoding, stem: str) -> None:
    with open(stem + ".cnf", "w") as fh:
        fh.write(to_dimacs(enc.cnf))
    with open(stem + ".varmap", "w") as fh:
        fh.write(render_varmap(enc.cnf, enc.alphabet, varmap_header(enc)))


@dataclass
class InferenceReport:
    strategy: str
    lower_bound: int
    upper_bound: int
    probes: list[ProbeRecord] = field(default_factory=list)
    result: tuple[int, Nfa] | None = None
    total_seconds: float = 0.0
    exhausted: bool = False
    bounds_trace: list[tuple[int, int]] = field(default_factory=list)

    @property
    def proven(self) -> bool:
        return self.result is not None and self.result[0] == self.lower_bound

    def table(self, timings: bool = True) -> str:
        return "\n".join([TABLE_HEADER] + [p.row(timings) for p in self.probes]) + "\n"

    def render(self, timings: bool = True) -> str:
        lines = [
            f"strategy {self.strategy}",
            f"lower_bound {self.lower_bound}",
            f"upper_bound {self.upper_bound}",
            f"result {self.result[0] if self.result else 'none'}",
            f"proven {'yes' if self.proven else 'no'}",
            f"exhausted {'yes' if self.exhausted else 'no'}",
            f"total_seconds {self.total_seconds:.3f}" if timings else "total_seconds -",
            f"probes {len(self.probes)}",
        ]
        for p in self.probes:
            secs = f"{p.seconds:.3f}" if timings else "-"
            line = (f"probe k={p.k} states={p.states} kind={p.kind} outcome={p.outcome} "
                    f"vars={p.vars} clauses={p.clauses} seconds={secs}")
            if p.note:
                line += f" note={p.note}"
            lines.append(line)
        return "\n".join(lines) + "\n\n" + self.table(timings)


def initial_bounds(sample: Sample) -> tuple[int, int]:
    lower = 2 if () in sample.neg and sample.pos else 1
    return lower, pta_size(sample)


def _reduce_note(out) -> str:
    if isinstance(out, Reduced):
        return "reduced: finals {" + ",".join(map(str, sorted(out.candidate_finals))) + "}"
    if isinstance(out, FailedEmptyCandidates):
        return "not reducible: no candidate finals"
    return f"not reducible: uncovered positive word of length {len(out.word)}"


def _try_reduce(nfa: Nfa, sample: Sample):
    out = reduce_kp1(nfa, sample)
    if out.ok:
        return out
    try:
        return reduce_or_enumerate(nfa, sample)
    except ReduceError:
        return out


def infer_min_k(sample: Sample, strategy: Strategy = Strategy(), probe_timeout: float | None = None,
                total_timeout: float | None = None, bisect: bool = False, jobs: int = 1,
                solver_command: str | None = None, dump_dir: str | None = None) -> InferenceReport:
    if strategy.plus_one and () in sample.pos:
        raise ValueError("the (k+1)-state models need the empty word to be non-positive")
    t0 = time.perf_counter()
    lower, upper = initial_bounds(sample)
    witness = pta_nfa(sample)
    rep = InferenceReport(strategy.label, lower, upper)
    rep.bounds_trace.append((lower, upper))
    tried: set[int] = set()
    pool = ProcessPoolExecutor(jobs) if jobs > 1 and not bisect else None
    pending: dict[int, Future] = {}

    def remaining() -> float | None:
        if total_timeout is None:
            return None
        return total_timeout - (time.perf_counter() - t0)

    def budget() -> Budget:
        rest = remaining()
        caps = [x for x in (probe_timeout, rest) if x is not None]
        return Budget(max(0.0, min(caps)) if caps else None)

    def run(kind: ModelKind, k: int) -> ProbeRecord:
        return probe(sample, kind, k, budget(), solver_command, dump_dir)

    def set_bounds(lo: int | None = None, hi: tuple[int, Nfa] | None = None):
        nonlocal witness
        if lo is not None:
            rep.lower_bound = max(rep.lower_bound, lo)
        if hi is not None and hi[0] < rep.upper_bound:
            assert hi[1].consistent(sample)
            rep.upper_bound, witness = hi
        rep.bounds_trace.append((rep.lower_bound, rep.upper_bound))

    try:
        while True:
            cands = [k for k in range(rep.lower_bound, rep.upper_bound) if k not in tried]
            if not cands:
                rep.result = (rep.upper_bound, witness)
                break
            rest = remaining()
            if rest is not None and rest <= 0:
                rep.exhausted = True
                break
            if bisect:
                k = cands[len(cands) // 2]
                rec = run(strategy.kind_for(sample, k), k)
            elif pool is not None:
                for c in cands[:jobs]:
                    if c not in pending:
                        pending[c] = pool.submit(probe, sample, strategy.kind_for(sample, c), c, budget(),
                                                 solver_command, dump_dir)
                k = cands[0]
                rec = pending.pop(k).result()
            else:
                k = cands[0]
                rec = run(strategy.kind_for(sample, k), k)
            tried.add(k)

            if rec.outcome == "UNSAT":
                rep.probes.append(rec)
                set_bounds(lo=k + 1)
            elif rec.outcome != "SAT":
                rep.probes.append(rec)
                set_bounds()
            elif not strategy.plus_one:
                rep.probes.append(rec)
                set_bounds(hi=(k, rec.nfa))
            else:
                red = _try_reduce(rec.nfa, sample)
                rep.probes.append(replace(rec, note=_reduce_note(red)))
                if red.ok:
                    set_bounds(hi=(k, red.nfa))
                    continue
                if strategy.refined:
                    raise AssertionError("a solution of the refined model could not be reduced")
                set_bounds(hi=(k + 1, rec.nfa))
                rec2 = run(REFINED, k)
                if rec2.outcome == "SAT":
                    red2 = _try_reduce(rec2.nfa, sample)
                    if not red2.ok:
                        raise AssertionError("a solution of the refined model could not be reduced")
                    rep.probes.append(replace(rec2, note=_reduce_note(red2)))
                    set_bounds(hi=(k, red2.nfa))
                else:
                    rep.probes.append(rec2)
                    set_bounds(lo=k + 1 if rec2.outcome == "UNSAT" else None)
    finally:
        if pool is not None:
            for f in pending.values():
                f.cancel()
            pool.shutdown(wait=True, cancel_futures=True)
    rep.total_seconds = time.perf_counter() - t0
    return rep
