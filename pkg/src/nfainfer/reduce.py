"""Turning a (k+1)-state single-final automaton into a k-state one.

The terminal state k+1 and the transitions into it are dropped. Every state
of the remaining automaton that no negative word can end in becomes final;
this fails if some positive word cannot end in any of those states.
"""
from __future__ import annotations

from dataclasses import dataclass

from .nfa import Nfa, mask_to_states
from .sample import Sample, Word


class ReduceError(ValueError):
    """The input violates a precondition of the reduction."""


class ShapeError(ReduceError):
    pass


class InconsistentInputError(ReduceError):
    pass


@dataclass(frozen=True)
class Reduced:
    nfa: Nfa
    candidate_finals: frozenset[int]

    ok = True


@dataclass(frozen=True)
class FailedEmptyCandidates:
    ok = False


@dataclass(frozen=True)
class FailedUncovered:
    word: Word

    ok = False


ReduceOutcome = Reduced | FailedEmptyCandidates | FailedUncovered

DEFAULT_ENUMERATION_CAP = 12


def check_terminal_shape(nfa: Nfa) -> None:
    top = nfa.num_states
    if top < 2:
        raise ShapeError("need at least two states")
    if nfa.finals != {top}:
        raise ShapeError(f"the only final state must be {top}, got {sorted(nfa.finals)}")
    if any(i == top for _, i, _ in nfa.transitions):
        raise ShapeError(f"state {top} has outgoing transitions")


def reduce_kp1(nfa: Nfa, sample: Sample, check: bool = True) -> ReduceOutcome:
    if check:
        check_terminal_shape(nfa)
        if () in sample.pos:
            raise ReduceError("the empty word must not be positive")
        if not nfa.consistent(sample):
            raise InconsistentInputError("automaton is not consistent with the sample")
    small = nfa.truncated()
    candidates = (1 << small.num_states) - 1
    for w in sample.neg:
        candidates &= ~small.end_mask(w)
    if not candidates and sample.pos:
        return FailedEmptyCandidates()
    for w in sample.pos:
        if not small.end_mask(w) & candidates:
            return FailedUncovered(w)
    finals = mask_to_states(candidates)
    return Reduced(small.with_finals(finals), finals)


def reduce_or_enumerate(nfa: Nfa, sample: Sample, cap: int = DEFAULT_ENUMERATION_CAP) -> ReduceOutcome:
    """``reduce_kp1``, falling back to trying every final-state subset."""
    from .oracle import enumerate_final_subsets

    if nfa.num_states - 1 > cap:
        raise ReduceError(f"{nfa.num_states - 1} states exceed the enumeration cap {cap}")
    out = reduce_kp1(nfa, sample)
    if isinstance(out, Reduced):
        return out
    small = nfa.truncated()
    finals = enumerate_final_subsets(small, sample, cap)
    if finals is None:
        return out
    return Reduced(small.with_finals(finals), finals)
