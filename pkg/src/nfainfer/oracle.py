"""Exhaustive ground truth for tiny samples. Exponential; for tests and fixtures.

``brute_min_k`` walks every transition relation of every size up to ``k_max``
(numpy-vectorised over blocks of relations) and, for each, every final-state
set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nfa import Nfa, mask_to_states
from .sample import Sample, prefixes

GUARD = 24
BLOCK_BITS = 18


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    k_min: int | None
    witness: Nfa | None
    states_explored: int


def _nfa_from_mask(mask: int, k: int, n: int, finals: int) -> Nfa:
    trans = set()
    for a in range(n):
        for i in range(k):
            for j in range(k):
                if mask >> (a * k * k + i * k + j) & 1:
                    trans.add((a, i + 1, j + 1))
    return Nfa(k, n, frozenset(trans), mask_to_states(finals))


def _search_k(sample: Sample, k: int) -> tuple[Nfa | None, int]:
    """First consistent (relation, finals) pair: relation bitmask ascending, finals descending."""
    n = sample.alphabet_size
    bits = n * k * k
    total = 1 << bits
    block = 1 << min(bits, BLOCK_BITS)
    low = np.uint8((1 << k) - 1)
    prefs = prefixes(sample.words)
    explored = 0
    for start in range(0, total, block):
        masks = np.arange(start, start + block, dtype=np.int64)
        succ = [[((masks >> (a * k * k + i * k)) & low).astype(np.uint8) for i in range(k)] for a in range(n)]
        ends = {(): np.ones(block, dtype=np.uint8)}
        for w in prefs:
            cur = ends[w[:-1]]
            row = succ[w[-1]]
            nxt = np.zeros(block, dtype=np.uint8)
            for i in range(k):
                nxt |= ((cur >> i) & 1) * row[i]
            ends[w] = nxt
        found = np.zeros(block, dtype=bool)
        oks = []
        for fin in range((1 << k) - 1, -1, -1):
            f = np.uint8(fin)
            ok = np.ones(block, dtype=bool)
            for w in sample.neg:
                ok &= (ends[w] & f) == 0
            for w in sample.pos:
                ok &= (ends[w] & f) != 0
            oks.append((fin, ok))
            found |= ok
        explored += block << k
        if found.any():
            t = int(np.argmax(found))
            fin = next(fin for fin, ok in oks if ok[t])
            return _nfa_from_mask(start + t, k, n, fin), explored
    return None, explored


def brute_min_k(sample: Sample, k_max: int) -> OracleResult:
    n = sample.alphabet_size
    if k_max < 1 or n * k_max * k_max + k_max > GUARD:
        raise OracleError(f"enumeration guard: {n}*{k_max}^2 + {k_max} must be <= {GUARD}")
    explored = 0
    for k in range(1, k_max + 1):
        witness, count = _search_k(sample, k)
        explored += count
        if witness is not None:
            return OracleResult(k, witness, explored)
    return OracleResult(None, None, explored)


def max_oracle_k(alphabet_size: int) -> int:
    k = 0
    while alphabet_size * (k + 1) ** 2 + (k + 1) <= GUARD:
        k += 1
    return k


def enumerate_final_subsets(nfa: Nfa, sample: Sample, cap: int = 12) -> frozenset[int] | None:
    """First final-state set making ``nfa`` consistent, largest sets first (ties: bitmask descending)."""
    k = nfa.num_states
    if k > cap:
        raise OracleError(f"{k} states exceed the cap {cap}")
    pos = [nfa.end_mask(w) for w in sample.pos]
    neg = [nfa.end_mask(w) for w in sample.neg]
    order = sorted(range(1 << k), key=lambda m: (-bin(m).count("1"), -m))
    for m in order:
        if all(e & m for e in pos) and not any(e & m for e in neg):
            return mask_to_states(m)
    return None
