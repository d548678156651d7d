from __future__ import annotations

from pathlib import Path

import pytest

from qedpoly.cli import parse_graph
from qedpoly.polyring import Poly

FIXTURES = Path(__file__).parent / "fixtures"

_criteria: dict[int, list[str]] = {}


def load(name: str):
    return parse_graph((FIXTURES / f"{name}.json").read_bytes())


def a(*ids: int) -> Poly:
    """Product of Schwinger parameters, a(1, 2) = a1*a2."""
    p = Poly.constant(1)
    for i in ids:
        p = p * Poly.var(i)
    return p


@pytest.fixture
def gamma1():
    return load("gamma1")


@pytest.fixture
def gamma2():
    return load("gamma2")


@pytest.fixture
def gamma2_reversed():
    return load("gamma2_photon_reversed")


@pytest.fixture
def ws3():
    return load("ws3")


@pytest.fixture
def banana3():
    return load("banana3")


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or report.outcome != "passed":
        _criteria.setdefault(props["criterion"], []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok = all(o == "passed" for o in _criteria[n])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}")
