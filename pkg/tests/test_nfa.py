import pytest
from hypothesis import given

from helpers import nfas, samples
from nfainfer.nfa import (
    Nfa, NfaError, augment_plus_one, classify, iter_paths, parse_nfa, pta_nfa, relabel_final_last,
    render_nfa, to_dot,
)
from nfainfer.oracle import brute_min_k
from nfainfer.sample import Sample

A, B = 0, 1

# minimal automaton for the example sample found by the exhaustive oracle
EX1_NFA = Nfa(3, 2, frozenset({(A, 1, 2), (B, 1, 3), (B, 2, 1), (B, 2, 2), (A, 3, 1)}), frozenset({2}))


def w(s):
    return tuple("ab".index(c) for c in s)


def test_no_finals_rejects_everything():
    n = Nfa(2, 2, frozenset({(A, 1, 2), (B, 2, 1)}), frozenset())
    assert not any(n.accepts(w(x)) for x in ["", "a", "ab", "aba"])


def test_single_state():
    n = Nfa(1, 2, frozenset(), frozenset({1}))
    assert n.accepts(())
    assert not n.accepts(w("a"))


def test_example_automaton_is_consistent(ex1):
    assert EX1_NFA.consistent(ex1)
    assert brute_min_k(ex1, 3).witness == EX1_NFA


def test_augmented_example(ex1):
    big = augment_plus_one(EX1_NFA)
    assert big.num_states == 4 and big.finals == {4}
    for x in ["a", "ab", "abba", "baa"]:
        assert big.accepts(w(x))
    for x in ["aab", "b", "ba", "bab"]:
        assert not big.accepts(w(x))
    # transitions into old final state 2 are copied into state 4
    assert big.has(A, 1, 4) and big.has(B, 2, 4)
    assert big.transitions - EX1_NFA.transitions == {(A, 1, 4), (B, 2, 4)}


def test_accepts_full_language_is_inconsistent(ex1):
    full = Nfa(1, 2, frozenset({(A, 1, 1), (B, 1, 1)}), frozenset({1}))
    assert not full.consistent(ex1)
    rejected, accepted = full.failures(ex1)
    assert rejected == [] and accepted == list(ex1.neg)


def test_alphabet_mismatch():
    with pytest.raises(NfaError):
        Nfa(1, 3).consistent(Sample.from_strings(["a"], [], "ab"))


def test_out_of_range():
    with pytest.raises(NfaError):
        Nfa(2, 1, frozenset({(0, 1, 3)}))
    with pytest.raises(NfaError):
        Nfa(2, 1, frozenset(), frozenset({0}))
    with pytest.raises(NfaError):
        Nfa(0, 1)


def test_augment_without_finals():
    n = Nfa(2, 2, frozenset({(A, 1, 2)}), frozenset())
    big = augment_plus_one(n)
    assert big.transitions == n.transitions and big.finals == {3}


def test_augment_keeps_initial_final():
    n = Nfa(2, 1, frozenset({(0, 1, 2), (0, 2, 1)}), frozenset({1}))
    assert augment_plus_one(n).finals == {1, 3}
    assert augment_plus_one(n, accept_empty=False).finals == {3}


def test_classify_two_finals():
    n = Nfa(3, 2, frozenset({(A, 1, 2), (B, 1, 3)}), frozenset({2, 3}))
    assert not classify(n, Sample.from_strings(["a", "b"], [], "ab")).in_F2


def test_example5_shape_stays_in_f3(ex1):
    fig = augment_plus_one(EX1_NFA).with_transitions({(B, 1, 2)})
    assert fig.consistent(ex1)
    c = classify(fig, ex1)
    assert c.in_F3


def test_f4_needs_a_twin():
    # the only b-transition of state 1 goes into the terminal state
    n = Nfa(2, 2, frozenset({(B, 1, 2)}), frozenset({2}))
    s = Sample.from_strings(["b"], ["a"], "ab")
    c = classify(n, s)
    assert c.in_F3 and not c.in_F4


def test_relabel_final_last():
    n = Nfa(3, 1, frozenset({(0, 1, 2), (0, 2, 3)}), frozenset({2}))
    r = relabel_final_last(n)
    assert r.finals == {3}
    assert r.transitions == {(0, 1, 3), (0, 3, 2)}
    with pytest.raises(NfaError):
        relabel_final_last(Nfa(2, 1, frozenset(), frozenset({1})))


def test_dot_single_node():
    dot = to_dot(Nfa(1, 1))
    assert dot.count("shape=circle") == 1
    assert "__start -> q1" in dot


def test_dot_merges_parallel_edges():
    dot = to_dot(Nfa(2, 2, frozenset({(A, 1, 2), (B, 1, 2)}), frozenset({2})))
    assert 'q1 -> q2 [label="a,b"]' in dot
    assert "doublecircle" in dot
    assert 'label="a"' in to_dot(Nfa(2, 2, frozenset({(A, 1, 2)})))


def test_exchange_format_roundtrip():
    text = render_nfa(EX1_NFA, "ab")
    assert text.splitlines()[:3] == ["states 3", "alphabet ab", "finals 2"]
    back, letters = parse_nfa(text)
    assert back == EX1_NFA and letters == "ab"


@pytest.mark.parametrize("text", ["states 2\nfinals 1\n", "states 2\nalphabet ab\nfinals 1\ntrans c 1 2\n",
                                  "states x\nalphabet a\nfinals\n", "bogus\n"])
def test_exchange_format_errors(text):
    with pytest.raises(NfaError):
        parse_nfa(text)


def test_pta(ex1):
    p = pta_nfa(ex1)
    assert p.num_states == 8
    assert p.consistent(ex1)


@given(nfas(), samples())
def test_simulation_matches_path_enumeration(n, s):
    for word in s.words:
        ends = {path[-1] for path in iter_paths(n, word)}
        assert n.end_states(word) == ends
        assert n.accepts(word) == bool(ends & n.finals)


@given(nfas(), samples())
def test_augmentation_preserves_consistency(n, s):
    # label the sample by the automaton so that it is consistent by construction
    # (the empty word is left out when the automaton accepts it)
    s = Sample(s.alphabet, tuple(x for x in s.words if n.accepts(x) and x),
               tuple(x for x in s.words if not n.accepts(x)))
    big = augment_plus_one(n, accept_empty=False)
    assert big.consistent(s)
    assert classify(big, s).in_F4


@given(nfas())
def test_augmentation_adds_one_state_and_the_copied_transitions(n):
    big = augment_plus_one(n)
    assert big.num_states == n.num_states + 1
    copied = {(a, i) for a, i, j in n.transitions if j in n.finals}
    assert len(big.transitions) - len(n.transitions) == len(copied)
    assert not any(i == big.num_states for _, i, _ in big.transitions)


@given(nfas(), samples())
def test_truncation_drops_last_state(n, s):
    if n.num_states == 1:
        return
    t = n.truncated()
    assert t.num_states == n.num_states - 1 and not t.finals
    top = n.num_states
    for word in s.words:
        assert t.end_states(word) <= n.end_states(word) - {top}
