import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from ptspace import GenConfig, generate_corpus, parse_tree  # noqa: E402

#: The running example tree used across the suite.
T1_TEXT = "->(a,b,+(*(<-(X(c,tau),d),e),f),g)"
T1_INVERSE_TEXT = "<-(a,b,+(*(->(X(c,tau),d),e),f),g)"


@pytest.fixture(scope="session")
def t1():
    return parse_tree(T1_TEXT)


def small_trees(count: int, seed: int = 7, min_act: int = 1, max_act: int = 5):
    """Deterministic small random trees for property tests."""
    config = GenConfig(seed=seed, min_activities=min_act, max_activities=max_act)
    return [entry.tree for entry in generate_corpus(config, count)]
