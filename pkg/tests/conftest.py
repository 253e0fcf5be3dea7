import pytest
from hypothesis import HealthCheck, settings

from nfainfer.nfa import Nfa
from nfainfer.sample import Sample

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

EX1_POS = ["a", "ab", "abba", "baa"]
EX1_NEG = ["aab", "b", "ba", "bab"]


@pytest.fixture
def ex1():
    return Sample.from_strings(EX1_POS, EX1_NEG, alphabet="ab")


@pytest.fixture
def ex2():
    # the empty word is positive here
    return Sample.from_strings(["", "ab", "abba", "baa"], ["aa", "aab", "b", "bab"], alphabet="ab")


@pytest.fixture
def ex6_sample():
    return Sample.from_strings(["ab", "abba", "ba", "baa"], ["aa", "aab", "b", "bab"], alphabet="ab")


@pytest.fixture
def ex6_nfa():
    # single final state 4 reached only through copies of other transitions;
    # "baa" ends only in state 2 after truncation, and "aa" ends there too
    trans = {(0, 1, 2), (1, 2, 1), (1, 1, 2), (1, 1, 3), (0, 3, 1), (0, 1, 4), (1, 2, 4), (0, 3, 4)}
    return Nfa(4, 2, frozenset(trans), frozenset({4}))


_results = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("acceptance")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    ok = call.excinfo is None
    prev = _results.get(number, (title, True))
    _results[number] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        title, ok = _results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
