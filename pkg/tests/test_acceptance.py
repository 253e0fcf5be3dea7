"""Acceptance criteria 1 to 9. Each test carries an ``acceptance`` marker; the
terminal summary prints one PASS/FAIL line per criterion."""
import random
import subprocess
import sys
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import label_words, random_f3, samples, tiny_corpus
from nfainfer.encode import REJECT, encode_hybrid_kp1, encode_prefix_k, encode_prefix_kp1, \
    encode_prefix_kp1_refined, encode_suffix_k, encode_suffix_kp1, decode_nfa
from nfainfer.nfa import Nfa, augment_plus_one
from nfainfer.oracle import brute_min_k, enumerate_final_subsets
from nfainfer.reduce import FailedEmptyCandidates, FailedUncovered, Reduced, reduce_kp1
from nfainfer.sample import gen_random_sample
from nfainfer.search import Strategy, infer_min_k
from nfainfer.solver import Sat, solve_embedded
from nfainfer.split import ils_split

ALL_STRATEGIES = [
    Strategy("prefix"), Strategy("suffix"),
    Strategy("hybrid", "ils"), Strategy("hybrid", "bestpre"), Strategy("hybrid", "bestsuf"),
    Strategy("prefix", plus_one=True), Strategy("suffix", plus_one=True),
    Strategy("hybrid", "ils", plus_one=True), Strategy("hybrid", "bestpre", plus_one=True),
    Strategy("hybrid", "bestsuf", plus_one=True), Strategy(refined=True),
]

CORPUS_SIZE = 200
TIME_LIMIT = 10.0
SLOPE_LOW, SLOPE_HIGH = 2.3, 2.6
SLOPE_KS = range(2, 7)


@pytest.mark.acceptance(1, "every strategy finds k_min=3 on the 8-word example, refuting k=1,2")
def test_example_minimality(ex1):
    assert brute_min_k(ex1, 3).k_min == 3
    t0 = time.perf_counter()
    for strategy in ALL_STRATEGIES:
        rep = infer_min_k(ex1, strategy)
        assert rep.result[0] == 3 and rep.proven, strategy.label
        assert rep.result[1].num_states == 3 and rep.result[1].consistent(ex1)
        refuted = {p.k for p in rep.probes if p.outcome == "UNSAT"}
        assert {1, 2} <= refuted, strategy.label
    elapsed = time.perf_counter() - t0
    print(f"\n11 strategies in {elapsed:.2f}s")
    assert elapsed < TIME_LIMIT


@pytest.mark.acceptance(2, "reduction round trip on the tiny corpus")
def test_reduction_round_trip():
    corpus = tiny_corpus()
    assert len(corpus) >= CORPUS_SIZE
    failures = []
    for sample, res in corpus:
        a = res.witness
        # the sample never has the empty word positive, so the copy of state 1 is dropped from the finals
        big = augment_plus_one(a, accept_empty=False)
        if 1 not in a.finals:
            assert big == augment_plus_one(a)
        out = reduce_kp1(big, sample)
        if not (isinstance(out, Reduced) and out.candidate_finals >= a.finals):
            failures.append((sample, out))
    assert failures == []


@pytest.mark.acceptance(3, "refined decodes always reduce on the first attempt")
def test_refined_guarantee():
    failures = checked = 0
    for sample, res in tiny_corpus():
        for k in range(1, res.k_min + 2):
            enc = encode_prefix_kp1_refined(sample, k)
            out = solve_embedded(enc.cnf)
            assert isinstance(out, Sat) == (k >= res.k_min)
            if isinstance(out, Sat):
                checked += 1
                failures += not reduce_kp1(decode_nfa(enc, out.assignment, sample), sample).ok
    assert checked >= CORPUS_SIZE
    assert failures == 0


def _maximality_cases():
    rng = random.Random(2024)
    for _ in range(400):
        states = rng.randint(2, 5)       # underlying automaton of at most 4 states
        big = random_f3(rng, states, density=rng.choice([0.2, 0.35, 0.5]))
        words = {tuple(rng.randrange(2) for _ in range(rng.randint(1, 4))) for _ in range(rng.randint(1, 8))}
        sample = label_words(big, sorted(words))
        # relabel one word so consistency with the truncated automaton is not free
        if rng.random() < 0.5 and sample.pos:
            flip = sample.pos[0]
            sample = type(sample)(sample.alphabet, sample.pos[1:], sample.neg + (flip,))
            if big.accepts(flip):
                big = Nfa(big.num_states, 2, frozenset(t for t in big.transitions if t[2] != states),
                          big.finals)
        if big.consistent(sample):
            yield big, sample


@pytest.mark.acceptance(4, "reduction success matches the existence of a consistent final set")
def test_reduction_maximality(ex1, ex6_sample, ex6_nfa):
    oracle_nfa = brute_min_k(ex1, 3).witness
    ex5 = augment_plus_one(oracle_nfa).with_transitions({(1, 1, 2)})
    fixtures = [(ex5, ex1), (ex6_nfa, ex6_sample), (augment_plus_one(oracle_nfa), ex1)]
    outcomes = {type(reduce_kp1(n, s)) for n, s in fixtures}
    assert outcomes == {FailedEmptyCandidates, FailedUncovered, Reduced}
    cases = fixtures + list(_maximality_cases())
    assert len(cases) >= 200
    kinds = set()
    for big, sample in cases:
        out = reduce_kp1(big, sample)
        found = enumerate_final_subsets(big.truncated(), sample)
        assert out.ok == (found is not None)
        if out.ok:
            assert found == out.candidate_finals
        kinds.add(type(out))
    assert kinds == {FailedEmptyCandidates, FailedUncovered, Reduced}


@pytest.mark.acceptance(5, "SAT minimum equals the exhaustive minimum on 100 random samples")
def test_oracle_agreement():
    strategies = [Strategy(), Strategy("suffix", plus_one=True), Strategy("hybrid"), Strategy(refined=True)]
    compared = 0
    seed = 10_000
    while compared < 100:
        rng = random.Random(seed)
        npos = rng.randint(1, 5)
        sample = gen_random_sample(2, npos, rng.randint(1, 9 - npos), 4, seed)
        seed += 1
        truth = brute_min_k(sample, 3).k_min
        if truth is None:
            continue
        strategy = strategies[compared % len(strategies)]
        assert infer_min_k(sample, strategy).result[0] == truth, (seed - 1, strategy.label)
        compared += 1


def _slope(make, sample):
    ks = np.array(list(SLOPE_KS), dtype=float)
    clauses = np.array([make(sample, int(k)).cnf.num_clauses for k in ks], dtype=float)
    return float(np.polyfit(np.log(ks), np.log(clauses), 1)[0])


@pytest.mark.acceptance(6, "clause growth and variable counts at desk scale")
def test_complexity_trends(ex1):
    slopes = {
        "prefix-k": _slope(encode_prefix_k, ex1),
        "suffix-kp1": _slope(encode_suffix_kp1, ex1),
        "hybrid-kp1": _slope(lambda s, k: encode_hybrid_kp1(s, k, ils_split(s, k + 1)), ex1),
        "suffix-k": _slope(encode_suffix_k, ex1),
    }
    print("\n" + "  ".join(f"{m}={v:.2f}" for m, v in slopes.items()))
    for m in ("prefix-k", "suffix-kp1", "hybrid-kp1"):
        assert slopes[m] <= SLOPE_LOW, m
    assert slopes["suffix-k"] >= SLOPE_HIGH
    for k in range(3, 7):
        assert encode_suffix_kp1(ex1, k).cnf.num_vars < encode_suffix_k(ex1, k).cnf.num_vars


def _reject_shapes(enc):
    return sorted(len(c) for c, g in zip(enc.cnf.clauses, enc.cnf.groups) if g == REJECT)


@pytest.mark.acceptance(7, "single-final model swaps k*|neg| binary reject clauses for |neg| units")
@settings(max_examples=150)
@given(samples(max_words=8, max_len=5), st.integers(1, 6))
def test_reject_clause_accounting(s, k):
    neg = [w for w in s.neg if w]
    assert _reject_shapes(encode_prefix_kp1(s, k)) == [1] * len(neg)
    assert _reject_shapes(encode_prefix_k(s, k)) == [2] * (k * len(neg))


@pytest.mark.acceptance(8, "two identical infer runs give byte-identical reports and DIMACS files")
@pytest.mark.parametrize("flags", [[], ["--model", "hybrid-ils", "--plus-one", "--seed", "5"]])
def test_determinism(tmp_path, flags):
    sample = tmp_path / "s.txt"
    sample.write_text("alphabet: ab\n+ a\n+ ab\n+ abba\n+ baa\n- aab\n- b\n- ba\n- bab\n")
    outputs = []
    for run in ("one", "two"):
        d = tmp_path / run
        cmd = [sys.executable, "-m", "nfainfer.cli", "infer", str(sample), *flags, "--no-timings",
               "--emit-report", str(d / "report.txt"), "--emit-cnf-dir", str(d / "cnf"), "--emit-dot", str(d / "a.dot")]
        d.mkdir()
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        files = {p.relative_to(d): p.read_bytes() for p in sorted(d.rglob("*")) if p.is_file()}
        outputs.append((proc.stdout, files))
    assert outputs[0] == outputs[1]
    assert any(str(p).endswith(".cnf") for p in outputs[0][1])


@pytest.mark.acceptance(9, "published benchmark tables are not reproducible; substitutes 5-7 are in place")
def test_table_substitutes():
    # the benchmark instances are unavailable, so no table value is checked here
    subs = {5: test_oracle_agreement, 6: test_complexity_trends, 7: test_reject_clause_accounting}
    for number, fn in subs.items():
        assert any(m.name == "acceptance" and m.args[0] == number for m in fn.pytestmark)
