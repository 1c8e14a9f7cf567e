import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from hylocheck import fixture_path, load_instance
from hylocheck.oracle import random_instance

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(str(fixture_path("tiny.json"))).parent


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def _load(name):
    return load_instance(FIXTURES / name)


@pytest.fixture(scope="session")
def tiny():
    return _load("tiny.json")


@pytest.fixture(scope="session")
def tiny_loop():
    return _load("tiny_loop.json")


@pytest.fixture(scope="session")
def modsucc2():
    return _load("modsucc2.json")


@pytest.fixture(scope="session")
def identity12():
    return _load("identity12.json")


PROFILES = [(0, 1), (0, 2), (1,), (0, 1, 1), (1, 2), (0, 0, 1)]


@st.composite
def small_instances(draw, max_a=3, max_b=3):
    profile = draw(st.sampled_from(PROFILES))
    size_a = draw(st.integers(0, max_a))
    size_b = draw(st.integers(1, max_b))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_instance(profile, size_a, size_b, seed)
