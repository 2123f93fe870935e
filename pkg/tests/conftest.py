import random
from fractions import Fraction

import pytest

from ehpack.params import builtin


@pytest.fixture(scope="session")
def eh2():
    return builtin("eh2")


@pytest.fixture(scope="session")
def eh3():
    return builtin("eh3")


@pytest.fixture(scope="session")
def prior2():
    return builtin("prior2")


@pytest.fixture(scope="session")
def example6():
    return builtin("example6")


def random_stream(rng: random.Random, n: int, small_share: float = 0.2) -> list[Fraction]:
    """Sizes with a mix of large items and items below 1/111."""
    out = []
    for _ in range(n):
        if rng.random() < small_share:
            out.append(Fraction(rng.randint(1, 10**6), 10**6 * 111))
        else:
            out.append(Fraction(rng.randint(9010, 10**6), 10**6))
    return out


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20240, help="seed for the randomized stream tests")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


def write_stream(path, sizes) -> None:
    path.write_text("".join(f"{s}\n" for s in sizes))
