"""Prefix/suffix cut positions for hybrid models.

A split assigns every sample word ``w`` a cut ``c`` so that ``w = u v`` with
``u = w[:c]`` handled by prefix paths and ``v = w[c:]`` by suffix paths.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .sample import EPS_TOKEN, Sample, SampleError, Word, prefixes, suffixes


@dataclass(frozen=True)
class SplitAssignment:
    cuts: dict[Word, int]

    def __post_init__(self):
        for w, c in self.cuts.items():
            if not 0 <= c <= len(w):
                raise ValueError(f"cut {c} outside 0..{len(w)} for word {w}")

    def __getitem__(self, word: Word) -> int:
        return self.cuts[word]

    def parts(self, word: Word) -> tuple[Word, Word]:
        c = self.cuts[word]
        return word[:c], word[c:]

    def covers(self, sample: Sample) -> bool:
        return all(w in self.cuts for w in sample.words)

    def reversed(self) -> SplitAssignment:
        """The mirrored split of the reversed words."""
        return SplitAssignment({w[::-1]: len(w) - c for w, c in self.cuts.items()})


def fitness(sample: Sample, split: SplitAssignment, k: int) -> int:
    us = [split.parts(w)[0] for w in sample.words]
    vs = [split.parts(w)[1] for w in sample.words]
    return len(prefixes(us)) + k * len(suffixes(vs))


def word_weights(sample: Sample) -> list[float]:
    """Roulette weights: 75% spread evenly, 25% proportional to word length."""
    words = sample.words
    total = sample.sigma
    return [0.75 / len(words) + (0.25 * len(w) / total if total else 0.0) for w in words]


class Init(str, Enum):
    RANDOM = "random"
    BEST_PREFIX = "bestpre"
    BEST_SUFFIX = "bestsuf"


@dataclass(frozen=True)
class IlsParams:
    max_iters: int | None = None  # None: 10 * |S|
    rng_seed: int = 0
    init: Init = Init.RANDOM

    def __post_init__(self):
        if self.max_iters is not None and self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")


def _random_cuts(sample: Sample, rng: random.Random) -> dict[Word, int]:
    return {w: rng.randint(0, len(w)) for w in sample.words}


def random_split(sample: Sample, seed: int) -> SplitAssignment:
    return SplitAssignment(_random_cuts(sample, random.Random(seed)))


@dataclass
class _Pool:
    """Reference counts of the prefixes of all u-parts and suffixes of all v-parts."""
    k: int
    pref: Counter = field(default_factory=Counter)
    suf: Counter = field(default_factory=Counter)

    def add(self, w: Word, c: int, sign: int = 1):
        for i in range(1, c + 1):
            self.pref[w[:i]] += sign
            if not self.pref[w[:i]]:
                del self.pref[w[:i]]
        for m in range(c, len(w)):
            self.suf[w[m:]] += sign
            if not self.suf[w[m:]]:
                del self.suf[w[m:]]

    def value(self) -> int:
        return len(self.pref) + self.k * len(self.suf)

    def best_cut(self, w: Word) -> int:
        """Cut of ``w`` adding the least to the fitness; ``w`` must not be in the pool."""
        n = len(w)
        new_pref = [0] * (n + 1)
        for c in range(1, n + 1):
            new_pref[c] = new_pref[c - 1] + (w[:c] not in self.pref)
        new_suf = [0] * (n + 1)
        for c in range(n - 1, -1, -1):
            new_suf[c] = new_suf[c + 1] + (w[c:] not in self.suf)
        costs = [new_pref[c] + self.k * new_suf[c] for c in range(n + 1)]
        return costs.index(min(costs))


def ils_split(sample: Sample, k: int, params: IlsParams = IlsParams(), trace: list[int] | None = None) -> SplitAssignment:
    """Iterated local search on the cut positions.

    Each iteration draws a word by roulette wheel and moves it to its best
    cut (ties to the smallest cut); moves that keep the fitness are accepted.
    ``trace`` receives the fitness after initialisation and after each move.
    """
    words = sample.words
    rng = random.Random(params.rng_seed)
    if params.init == Init.RANDOM:
        cuts = _random_cuts(sample, rng)
    elif params.init == Init.BEST_PREFIX:
        cuts = dict(best_prefix_split(sample).cuts)
    else:
        cuts = dict(best_suffix_split(sample).cuts)
    iters = 10 * len(words) if params.max_iters is None else params.max_iters

    pool = _Pool(k)
    for w in words:
        pool.add(w, cuts[w])
    if trace is not None:
        trace.append(pool.value())
    if not words or iters == 0:
        return SplitAssignment(cuts)
    weights = word_weights(sample)
    for _ in range(iters):
        (w,) = rng.choices(words, weights=weights)
        pool.add(w, cuts[w], -1)
        cuts[w] = pool.best_cut(w)
        pool.add(w, cuts[w])
        if trace is not None:
            trace.append(pool.value())
    return SplitAssignment(cuts)


def _greedy_cover(sample: Sample, anchored_suffix: bool) -> SplitAssignment:
    words = sample.words
    parts = suffixes(words) if anchored_suffix else prefixes(words)
    holders: dict[Word, list[Word]] = {u: [] for u in parts}
    for w in words:
        own = {w[i:] for i in range(len(w))} if anchored_suffix else {w[:i] for i in range(1, len(w) + 1)}
        for u in own:
            holders[u].append(w)

    def key(u):
        # ties: longer first, then lexicographic read from the anchored end
        return (-len(u) * len(holders[u]), -len(u), u[::-1] if anchored_suffix else u)

    cuts = {w: 0 for w in words if not w}
    uncovered = {w for w in words if w}
    for u in sorted(parts, key=key):
        if not uncovered:
            break
        for w in holders[u]:
            if w in uncovered:
                cuts[w] = len(w) - len(u) if anchored_suffix else len(u)
                uncovered.discard(w)
    return SplitAssignment({w: cuts[w] for w in words})


def best_suffix_split(sample: Sample) -> SplitAssignment:
    """Greedy cover of the words by suffixes ranked by length times number of holders."""
    return _greedy_cover(sample, anchored_suffix=True)


def best_prefix_split(sample: Sample) -> SplitAssignment:
    return _greedy_cover(sample, anchored_suffix=False)


def render_split(split: SplitAssignment, sample: Sample) -> str:
    return "".join(f"{sample.show(w)} {split[w]}\n" for w in sample.words)


def parse_split(text: str, sample: Sample) -> SplitAssignment:
    index = {c: i for i, c in enumerate(sample.alphabet)}
    cuts = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            tok, cut = line.split()
            w = () if tok == EPS_TOKEN else tuple(index[c] for c in tok)
            cuts[w] = int(cut)
        except (ValueError, KeyError):
            raise SampleError(f"cannot parse split entry {line!r}", lineno) from None
    split = SplitAssignment(cuts)
    if not split.covers(sample):
        missing = next(w for w in sample.words if w not in cuts)
        raise SampleError(f"split has no cut for word {sample.show(missing)!r}")
    return split
