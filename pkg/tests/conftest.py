import pytest

from fockbell.fock import FockPair


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in rep.nodeid and rep.when == "call":
                label = dict(rep.user_properties).get("criterion", rep.nodeid)
                lines.append((label, outcome.upper()[:4]))
    if lines:
        terminalreporter.section("acceptance criteria")
        for label, verdict in sorted(lines):
            terminalreporter.write_line(f"[{verdict}] {label}")


@pytest.fixture
def pair():
    return FockPair
