import sys

import pytest
from hypothesis import strategies as st

from polyadic.words import Alphabet, Word


@pytest.fixture
def uv():
    return Alphabet(("u", "v1"))


def words(alphabet: Alphabet, max_runs: int = 12, max_exp: int = 3):
    """Hypothesis strategy: random raw run lists, reduced on construction."""
    run = st.tuples(st.integers(0, len(alphabet) - 1),
                    st.integers(-max_exp, max_exp).filter(bool))
    return st.lists(run, max_size=max_runs).map(lambda runs: Word(alphabet, tuple(runs)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
