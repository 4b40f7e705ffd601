"""Shared fixtures and the acceptance summary hook."""

from __future__ import annotations

from pathlib import Path

import pytest

from lodsim.kb import IRI, KnowledgeBase, Triple, load_kb, parse_ntriples

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
MOVIES_NT = FIXTURES / "movies.nt"
LABELS_NT = FIXTURES / "labels.nt"
FLIP_NT = FIXTURES / "ranking_flip.nt"

EX = "http://ex/"


def ex(name: str) -> IRI:
    return IRI(EX + name)


@pytest.fixture(scope="session")
def movies_triples() -> list[Triple]:
    triples, diags = parse_ntriples(MOVIES_NT.read_text(), strict=True)
    assert not diags
    return triples


@pytest.fixture(scope="session")
def movies_kb() -> KnowledgeBase:
    kb, diags = load_kb(MOVIES_NT, strict=True)
    assert not diags
    return kb


@pytest.fixture(scope="session")
def labeled_kb() -> KnowledgeBase:
    kb, diags = load_kb(MOVIES_NT, LABELS_NT, strict=True)
    assert not diags
    return kb


@pytest.fixture(scope="session")
def flip_kb() -> KnowledgeBase:
    kb, diags = load_kb(FLIP_NT, strict=True)
    assert not diags
    return kb


# --- acceptance summary ---------------------------------------------------
# Tests in test_acceptance.py each cover one acceptance criterion; after
# the run, print one PASS/FAIL line per criterion.

_descriptions: dict[str, str] = {}
_outcomes: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if "test_acceptance" in item.nodeid:
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _descriptions[item.nodeid] = doc


def pytest_runtest_logreport(report):
    if report.nodeid not in _descriptions:
        return
    if report.when == "call":
        _outcomes[report.nodeid] = "PASS" if report.passed else "FAIL"
    elif report.failed:
        _outcomes[report.nodeid] = "FAIL"
    elif report.when == "setup" and report.skipped:
        _outcomes[report.nodeid] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _descriptions:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for nodeid, description in _descriptions.items():
        outcome = _outcomes.get(nodeid, "NOT RUN")
        terminalreporter.write_line(f"{outcome:4s}  {description}")
