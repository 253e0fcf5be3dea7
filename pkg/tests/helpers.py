"""Shared random corpora, cached per test session."""
import random
from functools import lru_cache

from hypothesis import strategies as st

from nfainfer.nfa import Nfa
from nfainfer.oracle import brute_min_k
from nfainfer.sample import Sample, gen_random_sample

ORACLE_K = 3


@lru_cache(maxsize=None)
def tiny_corpus(size: int = 220):
    """(sample, oracle result) pairs: |alphabet|=2, at most 8 words of length <= 4, k_min <= 3."""
    out = []
    seed = 0
    while len(out) < size:
        rng = random.Random(seed)
        npos = rng.randint(1, 5)
        nneg = rng.randint(0, 8 - npos)
        sample = gen_random_sample(2, npos, nneg, 4, seed)
        res = brute_min_k(sample, ORACLE_K)
        if res.k_min is not None:
            out.append((sample, res))
        seed += 1
    return tuple(out)


def random_f3(rng: random.Random, states: int, alphabet_size: int = 2, density: float = 0.35) -> Nfa:
    """Random automaton whose only final state is the last one, which has no outgoing transitions."""
    trans = set()
    for a in range(alphabet_size):
        for i in range(1, states):
            for j in range(1, states + 1):
                if rng.random() < density:
                    trans.add((a, i, j))
    return Nfa(states, alphabet_size, frozenset(trans), frozenset({states}))


def label_words(nfa: Nfa, words, letters="ab") -> Sample:
    words = [tuple(w) for w in words]
    pos = [w for w in words if nfa.accepts(w)]
    neg = [w for w in words if not nfa.accepts(w)]
    return Sample(letters[: nfa.alphabet_size], tuple(pos), tuple(neg))


def words_st(alphabet_size=2, max_len=4):
    return st.lists(st.integers(0, alphabet_size - 1), max_size=max_len).map(tuple)


@st.composite
def samples(draw, alphabet_size=2, max_words=7, max_len=4, allow_empty_positive=False):
    letters = "abc"[:alphabet_size]
    words = draw(st.lists(words_st(alphabet_size, max_len), min_size=1, max_size=max_words, unique=True))
    labels = draw(st.lists(st.booleans(), min_size=len(words), max_size=len(words)))
    pos = [w for w, lab in zip(words, labels) if lab and (w or allow_empty_positive)]
    neg = [w for w, lab in zip(words, labels) if not lab or (not w and not allow_empty_positive)]
    return Sample(letters, tuple(pos), tuple(neg))


@st.composite
def nfas(draw, alphabet_size=2, max_states=3):
    k = draw(st.integers(1, max_states))
    cells = [(a, i, j) for a in range(alphabet_size) for i in range(1, k + 1) for j in range(1, k + 1)]
    trans = draw(st.sets(st.sampled_from(cells)))
    finals = draw(st.sets(st.integers(1, k)))
    return Nfa(k, alphabet_size, frozenset(trans), frozenset(finals))
