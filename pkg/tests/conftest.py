import random

import pytest
from hypothesis import strategies as st

from bicsim.indexer import Record

ACCEPTANCE_LINES = []


def random_record(rng: random.Random, w: int, alphabet: int = 256, p_valid: float = 0.8) -> Record:
    words = [rng.randrange(alphabet) for _ in range(w)]
    valid = [rng.random() < p_valid for _ in range(w)]
    return Record(words, valid)


def random_instance(rng: random.Random, max_m=16, max_n=64, max_w=64):
    m = rng.randint(1, max_m)
    n = rng.randint(1, max_n)
    w = rng.randint(1, max_w)
    # a small alphabet now and then so that matches are common
    alphabet = rng.choice([4, 16, 256])
    records = [random_record(rng, w, alphabet, rng.random()) for _ in range(n)]
    keys = [rng.randrange(alphabet) for _ in range(m)]
    return records, keys


@st.composite
def records_and_keys(draw, max_m=8, max_n=12, max_w=12):
    w = draw(st.integers(1, max_w))
    alphabet = draw(st.sampled_from([3, 16, 256]))
    byte = st.integers(0, alphabet - 1)
    rec = st.builds(
        Record,
        st.lists(byte, min_size=w, max_size=w),
        st.lists(st.booleans(), min_size=w, max_size=w),
    )
    records = draw(st.lists(rec, min_size=1, max_size=max_n))
    keys = draw(st.lists(byte, min_size=1, max_size=max_m))
    return records, keys


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
