from importlib import resources

import pytest

from tiospec.textio import load, parse_spec


def shipped(name: str):
    """Automaton from a shipped model file (``file`` or ``file:NAME``)."""
    fname, _, pick = name.partition(":")
    spec = load(resources.files("tiospec") / "models" / f"{fname}.tioa")
    return spec.automata[pick] if pick else next(iter(spec.automata.values()))


@pytest.fixture
def model():
    return shipped


_criteria: dict[str, list] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "::test_criterion_" in report.nodeid:
        num = report.nodeid.split("::test_criterion_")[1].split("_")[0]
        _criteria.setdefault(num, []).append((report.passed, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria, key=int):
        runs = _criteria[num]
        verdict = "PASS" if all(ok for ok, _ in runs) else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict} ({sum(d for _, d in runs):.1f} s)")
