from __future__ import annotations

import pytest

import assesskit

IR_FIXTURE_ANSWERS = [
    ("IR.1", "Y"),
    ("IR.2", "Y"),
    ("IR.3", "N"),
    ("IR.4", "D"),
    ("IR.5", "Y"),
]


@pytest.fixture(scope="session")
def reference_catalog():
    return assesskit.load_reference_catalog()


@pytest.fixture(scope="session")
def sample_catalog():
    return assesskit.load_sample_catalog()


def build_ir_fixture_assessment(catalog):
    """The five-requirement incident response fixture answered Y,Y,N,D,Y."""
    view = assesskit.select_level(catalog, assesskit.SecurityLevel.HIGH)
    a = assesskit.new_assessment(view, organization="Fixture Org")
    for rid, code in IR_FIXTURE_ANSWERS:
        a = assesskit.record_response(
            a, rid, assesskit.ResponseEntry(assesskit.Satisfaction(code))
        )
    return a


@pytest.fixture
def ir_fixture_assessment(sample_catalog):
    return build_ir_fixture_assessment(sample_catalog)


def build_reference_scorecard_assessment(catalog):
    """Deterministic mixed-answer assessment over the full reference catalog.

    Requirement i of every family gets the code at position (i-1) mod 5 of
    Y, P(0.5), N, Y, D. Drives the committed radar golden file.
    """
    pattern = [("Y", None), ("P", 0.5), ("N", None), ("Y", None), ("D", None)]
    view = assesskit.select_level(catalog, assesskit.SecurityLevel.HIGH)
    a = assesskit.new_assessment(view, organization="Golden Org")
    for requirement in view.iter_requirements():
        code, partial = pattern[(requirement.index - 1) % len(pattern)]
        a = assesskit.record_response(
            a,
            requirement.id,
            assesskit.ResponseEntry(assesskit.Satisfaction(code), partial_value=partial),
        )
    return a


_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance_results[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for nodeid in sorted(_acceptance_results):
        outcome = _acceptance_results[nodeid]
        label = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"  ACCEPTANCE {label}: {nodeid}")
