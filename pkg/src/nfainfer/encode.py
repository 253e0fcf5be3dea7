"""SAT models for "is there a consistent NFA with this many states?".

Families:

* ``prefix-k`` / ``suffix-k`` / ``hybrid-k`` describe an arbitrary k-state NFA
  with a final flag per state.
* ``prefix-kp1`` / ``suffix-kp1`` / ``hybrid-kp1`` describe a (k+1)-state NFA
  whose only final state is k+1 and which has no transition leaving k+1.
  Such an automaton exists whenever a k-state one does (see
  :func:`nfainfer.nfa.augment_plus_one`), and the models are smaller.
* ``prefix-kp1-refined`` additionally guesses the final states of a k-state
  automaton hidden inside the (k+1)-state one, so that :mod:`nfainfer.reduce`
  always recovers it.

Clauses are tagged with a group name; :func:`stats` reports the per-group
counts.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product

from .cnf import Cnf, Delta, Final, PathP, PathS, PFinal, add_iff_or_of_pairs, evaluate
from .nfa import Nfa
from .sample import Sample, Word, prefixes, suffixes
from .split import SplitAssignment


class Model(str, Enum):
    PREFIX_K = "prefix-k"
    SUFFIX_K = "suffix-k"
    HYBRID_K = "hybrid-k"
    PREFIX_KP1 = "prefix-kp1"
    SUFFIX_KP1 = "suffix-kp1"
    HYBRID_KP1 = "hybrid-kp1"
    PREFIX_KP1_REFINED = "prefix-kp1-refined"

    @property
    def plus_one(self) -> bool:
        return self.value.endswith(("kp1", "kp1-refined"))

    @property
    def hybrid(self) -> bool:
        return self.value.startswith("hybrid")


@dataclass(frozen=True)
class ModelKind:
    model: Model
    split: SplitAssignment | None = None
    clone_f4: bool = True

    def __post_init__(self):
        if self.model.hybrid and self.split is None:
            raise ValueError(f"{self.model.value} needs a split")

    @property
    def label(self) -> str:
        return self.model.value


class EncodingError(ValueError):
    pass


@dataclass
class Encoding:
    cnf: Cnf
    kind: ModelKind
    k: int          # size of the automaton the caller asked about
    k_target: int   # number of states the instance describes (k or k+1)
    alphabet: str


@dataclass(frozen=True)
class EncodingStats:
    num_vars: int
    num_clauses: int
    vars_by_kind: dict[str, int]
    clauses_by_group: dict[str, int]


# clause groups
EMPTY_WORD = "empty-word"
PREFIX_START = "prefix-start"
PREFIX_STEP = "prefix-step"
SUFFIX_START = "suffix-start"
SUFFIX_STEP = "suffix-step"
ACCEPT = "accept"
REJECT = "reject"
LINK_ACCEPT = "link-accept"
LINK_REJECT = "link-reject"
CLONE = "clone"
SAFE_FINAL = "safe-final"
FINAL_SUPPORT = "final-support"
FINAL_COVER = "final-cover"


class _Builder:
    """Shared state of one encoding run; ``top`` is the number of states, ``inner`` the
    states paths may continue from (all of them, or all but the terminal one)."""

    def __init__(self, sample: Sample, top: int, plus_one: bool):
        self.sample = sample
        self.n = sample.alphabet_size
        self.top = top
        self.plus_one = plus_one
        self.inner = range(1, top) if plus_one else range(1, top + 1)
        self.states = range(1, top + 1)
        self.cnf = Cnf()

    # allocation; order: transitions, final flags, paths, auxiliaries
    def alloc_delta(self):
        for a in range(self.n):
            for i in self.inner:
                for j in self.states:
                    self.cnf.new_var(Delta(a, i, j))

    def alloc_final(self):
        for i in self.states:
            self.cnf.new_var(Final(i))

    def alloc_pfinal(self):
        for i in self.inner:
            self.cnf.new_var(PFinal(i))

    def alloc_prefix_paths(self, prefs):
        for w in prefs:
            for i in self.states:
                self.cnf.new_var(PathP(w, i))

    def alloc_suffix_paths(self, sufs):
        ends = [self.top] if self.plus_one else list(self.states)
        for w in sufs:
            for i in self.inner:
                for j in ends:
                    self.cnf.new_var(PathS(w, i, j))

    def d(self, a, i, j):
        return self.cnf.varmap[Delta(a, i, j)]

    def f(self, i):
        return self.cnf.varmap[Final(i)]

    def p(self, w, i):
        return self.cnf.varmap[PathP(w, i)]

    def s(self, w, i, j):
        return self.cnf.varmap[PathS(w, i, j)]

    def fs(self, i):
        return self.cnf.varmap[PFinal(i)]

    # path constraints
    def prefix_paths(self, prefs):
        cnf = self.cnf
        for w in prefs:
            a = w[-1]
            if len(w) == 1:
                for i in self.states:
                    cnf.add((-self.d(a, 1, i), self.p(w, i)), PREFIX_START)
                    cnf.add((self.d(a, 1, i), -self.p(w, i)), PREFIX_START)
            else:
                v = w[:-1]
                for i in self.states:
                    pairs = [(self.p(v, j), self.d(a, j, i)) for j in self.inner]
                    add_iff_or_of_pairs(cnf, self.p(w, i), pairs, PREFIX_STEP)

    def suffix_paths(self, sufs):
        cnf = self.cnf
        ends = [self.top] if self.plus_one else list(self.states)
        for w in sufs:
            a = w[0]
            for i, j in product(self.inner, ends):
                if len(w) == 1:
                    cnf.add((-self.d(a, i, j), self.s(w, i, j)), SUFFIX_START)
                    cnf.add((self.d(a, i, j), -self.s(w, i, j)), SUFFIX_START)
                else:
                    v = w[1:]
                    pairs = [(self.d(a, i, l), self.s(v, l, j)) for l in self.inner]
                    add_iff_or_of_pairs(cnf, self.s(w, i, j), pairs, SUFFIX_STEP)

    # acceptance of whole words, k-state models
    def empty_word(self):
        if () in self.sample.pos:
            self.cnf.add((self.f(1),), EMPTY_WORD)
        if () in self.sample.neg:
            self.cnf.add((-self.f(1),), EMPTY_WORD)

    def some_final(self, lits_by_state: dict[int, list[int]], group: str):
        """At least one state i with all of ``lits_by_state[i]`` and f_i true."""
        ys = [self.cnf.add_and(lits + [self.f(i)], group) for i, lits in lits_by_state.items()]
        self.cnf.add(ys, group)

    def accept_k(self, w: Word, ends: dict[int, list[int]], group=ACCEPT):
        self.some_final(ends, group)

    def reject_k(self, ends: dict[int, list[int]], group=REJECT):
        for i, lits in ends.items():
            self.cnf.add([-x for x in lits] + [-self.f(i)], group)

    def clone_clauses(self):
        """Each transition into the terminal state has a twin into an ordinary state."""
        last = sorted({w[-1] for w in self.sample.pos if w})
        for a in last:
            for i in self.inner:
                self.cnf.add([-self.d(a, i, self.top)] + [self.d(a, i, j) for j in self.inner], CLONE)


def _require_no_empty_positive(sample: Sample):
    if () in sample.pos:
        raise EncodingError("(k+1)-state models need the empty word outside the positive words")


def _check_k(k: int):
    if k < 1:
        raise EncodingError("k must be >= 1")


def encode_prefix_k(sample: Sample, k: int) -> Encoding:
    _check_k(k)
    b = _Builder(sample, k, plus_one=False)
    prefs = prefixes(sample.words)
    b.alloc_delta()
    b.alloc_final()
    b.alloc_prefix_paths(prefs)
    b.empty_word()
    b.prefix_paths(prefs)
    for w in sample.pos:
        if w:
            b.accept_k(w, {i: [b.p(w, i)] for i in b.states})
    for w in sample.neg:
        if w:
            b.reject_k({i: [b.p(w, i)] for i in b.states})
    return Encoding(b.cnf, ModelKind(Model.PREFIX_K), k, k, sample.alphabet)


def encode_suffix_k(sample: Sample, k: int) -> Encoding:
    _check_k(k)
    b = _Builder(sample, k, plus_one=False)
    sufs = suffixes(sample.words)
    b.alloc_delta()
    b.alloc_final()
    b.alloc_suffix_paths(sufs)
    b.empty_word()
    b.suffix_paths(sufs)
    for w in sample.pos:
        if w:
            b.accept_k(w, {i: [b.s(w, 1, i)] for i in b.states})
    for w in sample.neg:
        if w:
            b.reject_k({i: [b.s(w, 1, i)] for i in b.states})
    return Encoding(b.cnf, ModelKind(Model.SUFFIX_K), k, k, sample.alphabet)


def _split_parts(sample: Sample, split: SplitAssignment):
    missing = [w for w in sample.words if w not in split.cuts]
    if missing:
        raise EncodingError(f"split has no cut for word {sample.show(missing[0])!r}")
    parts = {w: split.parts(w) for w in sample.words}
    us = [u for u, _ in parts.values()]
    vs = [v for _, v in parts.values()]
    return parts, prefixes(us), suffixes(vs)


def encode_hybrid_k(sample: Sample, k: int, split: SplitAssignment) -> Encoding:
    _check_k(k)
    parts, prefs, sufs = _split_parts(sample, split)
    b = _Builder(sample, k, plus_one=False)
    b.alloc_delta()
    b.alloc_final()
    b.alloc_prefix_paths(prefs)
    b.alloc_suffix_paths(sufs)
    b.empty_word()
    b.prefix_paths(prefs)
    b.suffix_paths(sufs)

    def ends(w):
        u, v = parts[w]
        if not v:
            return {i: [b.p(u, i)] for i in b.states}
        if not u:
            return {i: [b.s(v, 1, i)] for i in b.states}
        return None

    for positive, group_words in ((True, sample.pos), (False, sample.neg)):
        for w in group_words:
            if not w:
                continue
            simple = ends(w)
            if simple is not None:
                if positive:
                    b.accept_k(w, simple)
                else:
                    b.reject_k(simple)
                continue
            u, v = parts[w]
            if positive:
                ys = [b.cnf.add_and((b.p(u, j), b.s(v, j, i), b.f(i)), LINK_ACCEPT)
                      for i, j in product(b.states, b.states)]
                b.cnf.add(ys, LINK_ACCEPT)
            else:
                for i, j in product(b.states, b.states):
                    b.cnf.add((-b.p(u, j), -b.s(v, j, i), -b.f(i)), LINK_REJECT)
    return Encoding(b.cnf, ModelKind(Model.HYBRID_K, split), k, k, sample.alphabet)


def _prefix_kp1_builder(sample: Sample, k: int, clone_f4: bool, refined: bool) -> _Builder:
    _check_k(k)
    _require_no_empty_positive(sample)
    b = _Builder(sample, k + 1, plus_one=True)
    top = b.top
    prefs = prefixes(sample.words)
    b.alloc_delta()
    if refined:
        b.alloc_pfinal()
    b.alloc_prefix_paths(prefs)
    b.prefix_paths(prefs)
    for w in sample.pos:
        b.cnf.add((b.p(w, top),), ACCEPT)
    for w in sample.neg:
        if w:
            b.cnf.add((-b.p(w, top),), REJECT)
    if clone_f4 or refined:
        b.clone_clauses()
    return b


def encode_prefix_kp1(sample: Sample, k: int, clone_f4: bool = True) -> Encoding:
    b = _prefix_kp1_builder(sample, k, clone_f4, refined=False)
    return Encoding(b.cnf, ModelKind(Model.PREFIX_KP1, clone_f4=clone_f4), k, k + 1, sample.alphabet)


def encode_prefix_kp1_refined(sample: Sample, k: int) -> Encoding:
    """(k+1)-state prefix model whose solutions always reduce to k states."""
    b = _prefix_kp1_builder(sample, k, clone_f4=True, refined=True)
    cnf, top = b.cnf, b.top
    # no negative word ends in a candidate final state
    for w in sample.neg:
        if w:
            for i in b.inner:
                cnf.add((-b.p(w, i), -b.fs(i)), SAFE_FINAL)
        else:
            cnf.add((-b.fs(1),), SAFE_FINAL)
    # a candidate final state is entered by the last step of some positive word,
    # through a transition that is cloned into the terminal state
    for i in b.inner:
        terms = []
        for w in sample.pos:
            v, a = w[:-1], w[-1]
            if v:
                for j in b.inner:
                    terms.append(cnf.add_and((b.p(v, j), b.d(a, j, i), b.d(a, j, top)), FINAL_SUPPORT))
            else:
                terms.append(cnf.add_and((b.d(a, 1, i), b.d(a, 1, top)), FINAL_SUPPORT))
        cnf.add([-b.fs(i)] + terms, FINAL_SUPPORT)
    # every positive word ends in some candidate final state
    for w in sample.pos:
        ys = [cnf.add_and((b.p(w, i), b.fs(i)), FINAL_COVER) for i in b.inner]
        cnf.add(ys, FINAL_COVER)
    return Encoding(cnf, ModelKind(Model.PREFIX_KP1_REFINED), k, k + 1, sample.alphabet)


def encode_suffix_kp1(sample: Sample, k: int, clone_f4: bool = True) -> Encoding:
    _check_k(k)
    _require_no_empty_positive(sample)
    b = _Builder(sample, k + 1, plus_one=True)
    sufs = suffixes(sample.words)
    b.alloc_delta()
    b.alloc_suffix_paths(sufs)
    b.suffix_paths(sufs)
    for w in sample.pos:
        b.cnf.add((b.s(w, 1, b.top),), ACCEPT)
    for w in sample.neg:
        if w:
            b.cnf.add((-b.s(w, 1, b.top),), REJECT)
    if clone_f4:
        b.clone_clauses()
    return Encoding(b.cnf, ModelKind(Model.SUFFIX_KP1, clone_f4=clone_f4), k, k + 1, sample.alphabet)


def encode_hybrid_kp1(sample: Sample, k: int, split: SplitAssignment, clone_f4: bool = True) -> Encoding:
    _check_k(k)
    _require_no_empty_positive(sample)
    parts, prefs, sufs = _split_parts(sample, split)
    b = _Builder(sample, k + 1, plus_one=True)
    cnf, top = b.cnf, b.top
    b.alloc_delta()
    b.alloc_prefix_paths(prefs)
    b.alloc_suffix_paths(sufs)
    b.prefix_paths(prefs)
    b.suffix_paths(sufs)
    for positive, words in ((True, sample.pos), (False, sample.neg)):
        sign = 1 if positive else -1
        for w in words:
            if not w:
                continue
            u, v = parts[w]
            if not v:
                cnf.add((sign * b.p(u, top),), ACCEPT if positive else REJECT)
            elif not u:
                cnf.add((sign * b.s(v, 1, top),), ACCEPT if positive else REJECT)
            elif positive:
                ys = [cnf.add_and((b.p(u, j), b.s(v, j, top)), LINK_ACCEPT) for j in b.inner]
                cnf.add(ys, LINK_ACCEPT)
            else:
                for j in b.inner:
                    cnf.add((-b.p(u, j), -b.s(v, j, top)), LINK_REJECT)
    if clone_f4:
        b.clone_clauses()
    return Encoding(cnf, ModelKind(Model.HYBRID_KP1, split, clone_f4), k, k + 1, sample.alphabet)


def encode(sample: Sample, kind: ModelKind, k: int) -> Encoding:
    """Build the instance of ``kind`` asking for a k-state automaton."""
    m = kind.model
    if m == Model.PREFIX_K:
        return encode_prefix_k(sample, k)
    if m == Model.SUFFIX_K:
        return encode_suffix_k(sample, k)
    if m == Model.HYBRID_K:
        return encode_hybrid_k(sample, k, kind.split)
    if m == Model.PREFIX_KP1:
        return encode_prefix_kp1(sample, k, kind.clone_f4)
    if m == Model.SUFFIX_KP1:
        return encode_suffix_kp1(sample, k, kind.clone_f4)
    if m == Model.HYBRID_KP1:
        return encode_hybrid_kp1(sample, k, kind.split, kind.clone_f4)
    if m == Model.PREFIX_KP1_REFINED:
        return encode_prefix_kp1_refined(sample, k)
    raise EncodingError(f"unknown model {m!r}")


def decode_nfa(encoding: Encoding, assignment, sample: Sample | None = None) -> Nfa:
    """Automaton described by a satisfying assignment (indexed by variable, slot 0 unused).

    With ``sample`` given, the result is checked for consistency.
    """
    cnf = encoding.cnf
    if len(assignment) <= cnf.num_vars:
        raise EncodingError("assignment does not cover every variable")
    if not evaluate(cnf, assignment):
        raise EncodingError("assignment does not satisfy the instance")
    trans = frozenset(sem for sem, v in cnf.varmap.items() if isinstance(sem, Delta) and assignment[v])
    top = encoding.k_target
    if encoding.kind.model.plus_one:
        finals = {top}
    else:
        finals = {sem.i for sem, v in cnf.varmap.items() if isinstance(sem, Final) and assignment[v]}
    nfa = Nfa(top, len(encoding.alphabet), frozenset((t.a, t.i, t.j) for t in trans), frozenset(finals))
    if sample is not None and not nfa.consistent(sample):
        raise AssertionError(f"decoded {encoding.kind.label} automaton is inconsistent with the sample")
    return nfa


def decode_pfinals(encoding: Encoding, assignment) -> frozenset[int]:
    return frozenset(sem.i for sem, v in encoding.cnf.varmap.items() if isinstance(sem, PFinal) and assignment[v])


def stats(encoding: Encoding) -> EncodingStats:
    cnf = encoding.cnf
    return EncodingStats(
        num_vars=cnf.num_vars,
        num_clauses=cnf.num_clauses,
        vars_by_kind=dict(sorted(cnf.var_counts().items())),
        clauses_by_group=dict(sorted(cnf.group_counts().items())),
    )
