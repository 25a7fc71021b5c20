import json
from pathlib import Path

import pytest

from conetype import serialize
from conetype.language import geometric_minimization

DATA = Path(__file__).parent / "data"

# (criterion, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE: list = []


def data_path(name: str) -> str:
    return str(DATA / name)


@pytest.fixture(scope="session")
def ex7():
    return serialize.load_automaton(DATA / "ex7.json")


@pytest.fixture(scope="session")
def ex7_ml(ex7):
    return geometric_minimization(ex7)


@pytest.fixture(scope="session")
def ex7_min(ex7_ml):
    return ex7_ml.quotient_dfa


@pytest.fixture(scope="session")
def sigma(ex7_min):
    return serialize.portrait_from_json(serialize.load_json(DATA / "sigma.json"), ex7_min)


@pytest.fixture(scope="session")
def rose2():
    return serialize.load_automaton(DATA / "rose2.json")


@pytest.fixture(scope="session")
def renaming():
    return json.loads((DATA / "renaming.json").read_text(encoding="utf-8"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
