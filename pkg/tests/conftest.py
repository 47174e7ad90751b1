import random
from fractions import Fraction

import pytest
from hypothesis import settings

from affine_descent.rootdata import build_root_datum

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repo")

RANK2 = ["A2", "B2", "G2"]


@pytest.fixture(scope="session")
def data():
    cache = {}

    def get(label, iso="adjoint"):
        key = (label, iso)
        if key not in cache:
            cache[key] = build_root_datum(label, iso)
        return cache[key]
    return get


def random_point(rnd: random.Random, rank: int, max_den: int = 12, span: int = 2):
    out = []
    for _ in range(rank):
        q = rnd.randint(1, max_den)
        out.append(Fraction(rnd.randint(-span * q, span * q), q))
    return tuple(out)


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance(request):
    """criterion number -> (ok, summary); printed after the run."""
    return request.config.stash.setdefault(ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, summary = results[n]
        terminalreporter.write_line(f"criterion {n} {'PASS' if ok else 'FAIL'}  {summary}")
