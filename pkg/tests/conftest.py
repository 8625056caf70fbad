import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one acceptance-criterion verdict for the terminal summary."""

    def record(criterion: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE_LINES.append((criterion, bool(ok), detail))
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in _ACCEPTANCE_LINES:
        status = "PASS" if ok else "FAIL"
        suffix = f" — {detail}" if detail else ""
        terminalreporter.write_line(f"[{status}] {criterion}{suffix}")
