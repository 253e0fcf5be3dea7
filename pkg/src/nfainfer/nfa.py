"""Nondeterministic finite automata without empty transitions.

States are numbered ``1..k`` and state 1 is always initial. Sets of states
are handled internally as bitmasks (bit ``i - 1`` stands for state ``i``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .sample import DEFAULT_LETTERS, Sample, Word, prefixes, suffixes

Transition = tuple[int, int, int]  # (symbol, source, target)


class NfaError(ValueError):
    pass


def mask_to_states(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def states_to_mask(states: Iterable[int]) -> int:
    m = 0
    for s in states:
        m |= 1 << (s - 1)
    return m


@dataclass(frozen=True)
class Nfa:
    num_states: int
    alphabet_size: int
    transitions: frozenset[Transition] = field(default_factory=frozenset)
    finals: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.num_states < 1:
            raise NfaError("an NFA needs at least one state")
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))
        k, n = self.num_states, self.alphabet_size
        for a, i, j in self.transitions:
            if not (0 <= a < n and 1 <= i <= k and 1 <= j <= k):
                raise NfaError(f"transition {(a, i, j)} out of range")
        if any(not 1 <= f <= k for f in self.finals):
            raise NfaError(f"final states {sorted(self.finals)} out of range 1..{k}")

    @property
    def initial(self) -> int:
        return 1

    @cached_property
    def _succ(self) -> list[list[int]]:
        # _succ[a][i - 1] is the bitmask of delta(i, a)
        table = [[0] * self.num_states for _ in range(self.alphabet_size)]
        for a, i, j in self.transitions:
            table[a][i - 1] |= 1 << (j - 1)
        return table

    @cached_property
    def final_mask(self) -> int:
        return states_to_mask(self.finals)

    def targets(self, state: int, symbol: int) -> tuple[int, ...]:
        return tuple(sorted(mask_to_states(self._succ[symbol][state - 1])))

    def has(self, symbol: int, source: int, target: int) -> bool:
        return bool(self._succ[symbol][source - 1] >> (target - 1) & 1)

    def sorted_transitions(self) -> list[Transition]:
        return sorted(self.transitions, key=lambda t: (t[1], t[0], t[2]))

    def step(self, mask: int, symbol: int) -> int:
        """Image of a state set under one symbol."""
        row = self._succ[symbol]
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= row[i]
            mask >>= 1
            i += 1
        return out

    def end_mask(self, word: Word) -> int:
        mask = 1
        for a in word:
            if not mask:
                break
            mask = self.step(mask, a)
        return mask

    def end_states(self, word: Word) -> frozenset[int]:
        return mask_to_states(self.end_mask(word))

    def accepts(self, word: Word) -> bool:
        return bool(self.end_mask(word) & self.final_mask)

    def failures(self, sample: Sample) -> tuple[list[Word], list[Word]]:
        """Positive words rejected and negative words accepted."""
        self._check_alphabet(sample)
        return ([w for w in sample.pos if not self.accepts(w)], [w for w in sample.neg if self.accepts(w)])

    def consistent(self, sample: Sample) -> bool:
        self._check_alphabet(sample)
        return all(self.accepts(w) for w in sample.pos) and not any(self.accepts(w) for w in sample.neg)

    def _check_alphabet(self, sample: Sample):
        if sample.alphabet_size != self.alphabet_size:
            raise NfaError(
                f"alphabet size mismatch: automaton has {self.alphabet_size}, sample has {sample.alphabet_size}"
            )

    def with_transitions(self, extra: Iterable[Transition]) -> Nfa:
        return Nfa(self.num_states, self.alphabet_size, self.transitions | frozenset(extra), self.finals)

    def with_finals(self, finals: Iterable[int]) -> Nfa:
        return Nfa(self.num_states, self.alphabet_size, self.transitions, frozenset(finals))

    def truncated(self) -> Nfa:
        """Drop the highest-numbered state and every transition touching it; no finals."""
        k = self.num_states - 1
        if k < 1:
            raise NfaError("cannot truncate a one-state automaton")
        kept = frozenset(t for t in self.transitions if t[1] <= k and t[2] <= k)
        return Nfa(k, self.alphabet_size, kept, frozenset())


def accepts(nfa: Nfa, word: Word) -> bool:
    return nfa.accepts(word)


def consistent(nfa: Nfa, sample: Sample) -> bool:
    return nfa.consistent(sample)


def iter_paths(nfa: Nfa, word: Word) -> Iterator[tuple[int, ...]]:
    """All state sequences for ``word`` starting in state 1 (depth first)."""
    def go(path, rest):
        if not rest:
            yield path
            return
        for j in nfa.targets(path[-1], rest[0]):
            yield from go(path + (j,), rest[1:])

    yield from go((1,), tuple(word))


def augment_plus_one(nfa: Nfa, accept_empty: bool | None = None) -> Nfa:
    """Add a fresh last state that is the only final one (besides state 1 for the empty word).

    Every transition into an old final state is copied into the new state,
    which gets no outgoing transitions. State 1 stays final when
    ``accept_empty`` is true; by default that is the case when it was final.
    Pass ``accept_empty=False`` when the empty word need not be accepted.
    """
    k = nfa.num_states
    new = k + 1
    if accept_empty is None:
        accept_empty = 1 in nfa.finals
    extra = {(a, i, new) for a, i, j in nfa.transitions if j in nfa.finals}
    finals = {new, 1} if accept_empty else {new}
    return Nfa(new, nfa.alphabet_size, nfa.transitions | extra, frozenset(finals))


@dataclass(frozen=True)
class NfaClass:
    in_F2: bool     # exactly one final state
    in_F3: bool     # ... which is the last state and has no outgoing transitions
    in_F4: bool     # ... and every transition into it copies one into an earlier state


def classify(nfa: Nfa, sample: Sample) -> NfaClass:
    """Which of the nested single-final families the automaton belongs to.

    The caller is responsible for consistency with the sample.
    """
    k = nfa.num_states
    in_f2 = len(nfa.finals) == 1
    in_f3 = in_f2 and nfa.finals == {k} and not any(i == k for _, i, _ in nfa.transitions)
    in_f4 = in_f3
    if in_f4:
        last_symbols = {w[0] for w in suffixes(sample.pos) if len(w) == 1}
        below = (1 << (k - 1)) - 1
        for a in last_symbols:
            for i in range(1, k):
                row = nfa._succ[a][i - 1]
                if row >> (k - 1) & 1 and not row & below:
                    in_f4 = False
    return NfaClass(in_f2, in_f3, in_f4)


def relabel_final_last(nfa: Nfa) -> Nfa:
    """Swap the unique final state with the highest-numbered state.

    State 1 must stay initial, so a unique final state 1 cannot be moved
    unless the automaton has a single state.
    """
    if len(nfa.finals) != 1:
        raise NfaError("relabelling needs exactly one final state")
    (f,) = nfa.finals
    k = nfa.num_states
    if f == k:
        return nfa
    if f == 1:
        raise NfaError("the final state is the initial state and cannot be moved")
    swap = {f: k, k: f}
    trans = frozenset((a, swap.get(i, i), swap.get(j, j)) for a, i, j in nfa.transitions)
    return Nfa(k, nfa.alphabet_size, trans, frozenset({k}))


def _letters(nfa: Nfa, letters: str | None) -> str:
    letters = letters or DEFAULT_LETTERS[: nfa.alphabet_size]
    if len(letters) < nfa.alphabet_size:
        raise NfaError("not enough letters for the alphabet")
    return letters


def to_dot(nfa: Nfa, letters: str | None = None, name: str = "nfa") -> str:
    letters = _letters(nfa, letters)
    out = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in range(1, nfa.num_states + 1):
        shape = "doublecircle" if q in nfa.finals else "circle"
        out.append(f'  q{q} [shape={shape}, label="q{q}"];')
    out.append("  __start -> q1;")
    edges: dict[tuple[int, int], list[int]] = {}
    for a, i, j in nfa.transitions:
        edges.setdefault((i, j), []).append(a)
    for (i, j), syms in sorted(edges.items()):
        label = ",".join(letters[a] for a in sorted(syms))
        out.append(f'  q{i} -> q{j} [label="{label}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def render_nfa(nfa: Nfa, letters: str | None = None) -> str:
    """Plain-text exchange format."""
    letters = _letters(nfa, letters)
    lines = [
        f"states {nfa.num_states}",
        f"alphabet {letters[: nfa.alphabet_size]}",
        " ".join(["finals"] + [str(f) for f in sorted(nfa.finals)]),
    ]
    lines += [f"trans {letters[a]} {i} {j}" for a, i, j in nfa.sorted_transitions()]
    return "\n".join(lines) + "\n"


def parse_nfa(text: str) -> tuple[Nfa, str]:
    """Read the exchange format; returns the automaton and its alphabet letters."""
    k = letters = finals = None
    trans = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        head, args = parts[0], parts[1:]
        try:
            if head == "states" and len(args) == 1:
                k = int(args[0])
            elif head == "alphabet" and len(args) == 1:
                letters = args[0]
            elif head == "finals":
                finals = [int(x) for x in args]
            elif head == "trans" and len(args) == 3:
                if letters is None or args[0] not in letters:
                    raise NfaError(f"line {lineno}: unknown symbol {args[0]!r}")
                trans.append((letters.index(args[0]), int(args[1]), int(args[2])))
            else:
                raise NfaError(f"line {lineno}: cannot parse {raw.strip()!r}")
        except ValueError as exc:
            if isinstance(exc, NfaError):
                raise
            raise NfaError(f"line {lineno}: {exc}") from None
    if k is None or letters is None or finals is None:
        raise NfaError("missing 'states', 'alphabet' or 'finals' line")
    return Nfa(k, len(letters), frozenset(trans), frozenset(finals)), letters


def pta_nfa(sample: Sample) -> Nfa:
    """Prefix tree acceptor of the positive words: accepts exactly them."""
    ids = {(): 1}
    for w in prefixes(sample.pos):
        ids[w] = len(ids) + 1
    trans = frozenset((w[-1], ids[w[:-1]], q) for w, q in ids.items() if w)
    finals = frozenset(ids[w] for w in sample.pos)
    return Nfa(len(ids), sample.alphabet_size, trans, finals)
