import numpy as np
import pytest


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for status, marker in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in terminalreporter.stats.get(status, []):
            if "test_acceptance" in rep.nodeid and getattr(rep, "when", "call") == "call":
                name = rep.nodeid.split("::")[-1]
                lines.append((name, marker))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, marker in sorted(lines):
            terminalreporter.write_line(f"{marker}  {name}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
