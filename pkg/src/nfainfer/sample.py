"""Samples of positive and negative words.

Words are tuples of symbol indices; the alphabet string of a sample only
matters for reading and printing. The empty word is ``()`` and is written
``<eps>`` in sample files.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable

Word = tuple[int, ...]

EPS_TOKEN = "<eps>"
DEFAULT_LETTERS = "abcdefghijklmnopqrstuvwxyz0123456789"


class SampleError(ValueError):
    """Malformed or contradictory sample."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _dedupe(words: Iterable[Word]) -> tuple[Word, ...]:
    return tuple(dict.fromkeys(tuple(w) for w in words))


@dataclass(frozen=True)
class Sample:
    alphabet: str
    pos: tuple[Word, ...]
    neg: tuple[Word, ...]

    def __post_init__(self):
        if not self.alphabet:
            raise SampleError("alphabet must contain at least one symbol")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise SampleError(f"alphabet {self.alphabet!r} has repeated letters")
        object.__setattr__(self, "pos", _dedupe(self.pos))
        object.__setattr__(self, "neg", _dedupe(self.neg))
        n = len(self.alphabet)
        for w in self.pos + self.neg:
            if any(not 0 <= a < n for a in w):
                raise SampleError(f"word {w!r} uses a symbol outside the alphabet")
        both = set(self.pos) & set(self.neg)
        if both:
            w = min(both, key=_order_key)
            raise SampleError(f"word {self.show(w)!r} is both positive and negative")

    @classmethod
    def from_strings(cls, pos: Iterable[str], neg: Iterable[str], alphabet: str | None = None) -> Sample:
        pos, neg = list(pos), list(neg)
        if alphabet is None:
            alphabet = "".join(sorted(set("".join(pos + neg)))) or "a"
        index = {c: i for i, c in enumerate(alphabet)}

        def conv(s):
            if s == EPS_TOKEN:
                return ()
            try:
                return tuple(index[c] for c in s)
            except KeyError as exc:
                raise SampleError(f"symbol {exc.args[0]!r} not in alphabet {alphabet!r}") from None

        return cls(alphabet, tuple(map(conv, pos)), tuple(map(conv, neg)))

    @property
    def alphabet_size(self) -> int:
        return len(self.alphabet)

    @property
    def words(self) -> tuple[Word, ...]:
        """All words, positives first."""
        return self.pos + self.neg

    @property
    def sigma(self) -> int:
        return sum(len(w) for w in self.words)

    def show(self, word: Word) -> str:
        if not word:
            return EPS_TOKEN
        return "".join(self.alphabet[a] for a in word)

    def reversed(self) -> Sample:
        return Sample(self.alphabet, tuple(w[::-1] for w in self.pos), tuple(w[::-1] for w in self.neg))

    def stats(self) -> SampleStats:
        return SampleStats(
            sigma=self.sigma,
            num_prefixes=len(prefixes(self.words)),
            num_suffixes=len(suffixes(self.words)),
            pta_states=pta_size(self),
        )


@dataclass(frozen=True)
class SampleStats:
    sigma: int
    num_prefixes: int
    num_suffixes: int
    pta_states: int


def _order_key(w: Word):
    return (len(w), w)


def prefixes(words: Iterable[Word]) -> tuple[Word, ...]:
    """Non-empty prefixes of the given words, ordered by length then lexicographically."""
    out = {w[:i] for w in words for i in range(1, len(w) + 1)}
    return tuple(sorted(out, key=_order_key))


def suffixes(words: Iterable[Word]) -> tuple[Word, ...]:
    """Non-empty suffixes of the given words, ordered by length then lexicographically."""
    out = {w[i:] for w in words for i in range(len(w))}
    return tuple(sorted(out, key=_order_key))


def pta_size(sample: Sample) -> int:
    """Number of states of the prefix tree acceptor of the positive words."""
    return 1 + len(prefixes(sample.pos))


def parse_sample(text: str) -> Sample:
    alphabet = None
    pos, neg = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if alphabet is None:
            if not line.startswith("alphabet:"):
                raise SampleError("expected 'alphabet: <letters>' header", lineno)
            alphabet = line[len("alphabet:"):].strip()
            if not alphabet:
                raise SampleError("empty alphabet", lineno)
            if len(set(alphabet)) != len(alphabet) or any(c.isspace() for c in alphabet):
                raise SampleError(f"alphabet {alphabet!r} must be distinct non-space letters", lineno)
            index = {c: i for i, c in enumerate(alphabet)}
            continue
        sign, body = line[0], line[1:].strip()
        if sign not in "+-":
            raise SampleError(f"expected '+' or '-' at start of {line!r}", lineno)
        if body == EPS_TOKEN:
            word = ()
        elif not body or " " in body:
            raise SampleError(f"malformed word {body!r}", lineno)
        else:
            bad = [c for c in body if c not in index]
            if bad:
                raise SampleError(f"symbol {bad[0]!r} not in alphabet {alphabet!r}", lineno)
            word = tuple(index[c] for c in body)
        (pos if sign == "+" else neg).append(word)
    if alphabet is None:
        raise SampleError("missing 'alphabet:' header")
    return Sample(alphabet, tuple(pos), tuple(neg))


def render_sample(sample: Sample) -> str:
    lines = [f"alphabet: {sample.alphabet}"]
    lines += [f"+ {sample.show(w)}" for w in sample.pos]
    lines += [f"- {sample.show(w)}" for w in sample.neg]
    return "\n".join(lines) + "\n"


def count_words(alphabet_size: int, max_len: int) -> int:
    """Number of words of length <= max_len, the empty word included."""
    return sum(alphabet_size**i for i in range(max_len + 1))


def gen_random_sample(
    alphabet_size: int,
    num_pos: int,
    num_neg: int,
    max_len: int,
    rng_seed: int,
    allow_empty_positive: bool = False,
    letters: str | None = None,
) -> Sample:
    """Draw a random sample of distinct words of length at most ``max_len``.

    The empty word may appear among the negatives; it is kept out of the
    positives unless ``allow_empty_positive`` is set.
    """
    if alphabet_size < 1 or max_len < 0 or num_pos < 0 or num_neg < 0:
        raise SampleError("sizes must be non-negative and the alphabet non-empty")
    total = count_words(alphabet_size, max_len)
    if num_pos + num_neg > total:
        raise SampleError(
            f"only {total} words of length <= {max_len} over {alphabet_size} symbols, "
            f"{num_pos + num_neg} requested"
        )
    if not allow_empty_positive and num_pos > total - 1:
        raise SampleError(f"only {total - 1} non-empty words available for {num_pos} positives")
    letters = (letters or DEFAULT_LETTERS)[:alphabet_size]
    if len(letters) < alphabet_size:
        raise SampleError("not enough letters for the requested alphabet size")

    rng = random.Random(rng_seed)
    if total <= 1 << 16:
        universe = [w for n in range(max_len + 1) for w in itertools.product(range(alphabet_size), repeat=n)]
        rng.shuffle(universe)
        draw = iter(universe)
    else:
        def _rejection():
            while True:
                n = rng.randint(0, max_len)
                yield tuple(rng.randrange(alphabet_size) for _ in range(n))
        draw = _rejection()

    seen: set[Word] = set()
    pos: list[Word] = []
    neg: list[Word] = []
    for w in draw:
        if len(pos) == num_pos and len(neg) == num_neg:
            break
        if w in seen:
            continue
        if len(pos) < num_pos and (w or allow_empty_positive):
            pos.append(w)
        elif len(neg) < num_neg:
            neg.append(w)
        else:
            continue
        seen.add(w)
    if len(pos) != num_pos or len(neg) != num_neg:
        raise SampleError("could not draw enough distinct words")
    return Sample(letters, tuple(pos), tuple(neg))
