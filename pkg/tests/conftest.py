import random

import numpy as np
import pytest

from magtor import exact
from magtor.core import TorusMagneticSystem, interleaved_form
from magtor.io import load_bundled_system


def diag(*d):
    return [[d[i] if i == j else 0 for j in range(len(d))] for i in range(len(d))]


def random_skew(rng, n, span=10):
    """Random integer skew matrix, resampled until nondegenerate."""
    while True:
        W = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = rng.randint(-span, span)
                W[i][j], W[j][i] = v, -v
        if exact.det(W) != 0:
            return W


def random_unimodular(rng, n, steps=20):
    """Product of elementary integer operations e_i += c e_j, det +1."""
    B = exact.identity(n)
    for _ in range(rng.randint(1, steps)):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        B[:, i] = B[:, i] + c * B[:, j]
    return B


@pytest.fixture
def ex_i():
    return load_bundled_system("example_i_a.json"), load_bundled_system("example_i_b.json")


@pytest.fixture
def ex_ii():
    return load_bundled_system("example_ii_a.json"), load_bundled_system("example_ii_b.json")


@pytest.fixture
def std2():
    return TorusMagneticSystem.from_rows(diag(1, 1), [[0, 1], [-1, 0]])


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def nprng():
    return np.random.default_rng(20240611)


def system(h, r):
    return TorusMagneticSystem.from_rows(h, interleaved_form(r).tolist())


# acceptance reporting: one PASS/FAIL line per marked criterion

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    crash = getattr(rep.longrepr, "reprcrash", None)
    detail = crash.message.splitlines()[0] if crash is not None and rep.failed else ""
    _ACCEPTANCE[mark.args[0]] = (mark.args[1], rep.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[n]
        line = f"{'PASS' if ok else 'FAIL'}  {n:2d}. {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
