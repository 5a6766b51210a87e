from pathlib import Path

import pytest

from ordlab.presentation import parse_presentation
from ordlab.wordproblem import WordBackend, get_backend, todd_coxeter

PRES_DIR = Path(__file__).resolve().parent.parent / "presentations"

GROUPS = ["z", "z2", "z3", "f2", "klein", "poincare"]


def pres_path(name):
    return PRES_DIR / f"{name}.pres"


def load(name):
    return parse_presentation(pres_path(name).read_text())


_backends = {}


def backend_for(name):
    if name not in _backends:
        _backends[name] = get_backend(load(name))
    return _backends[name]


@pytest.fixture(scope="session")
def backends():
    return backend_for


@pytest.fixture(scope="session")
def poincare_tc():
    return WordBackend(todd_coxeter(load("poincare")))


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
