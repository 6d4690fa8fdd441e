import pytest

_ACCEPTANCE = {}


@pytest.fixture
def acceptance(request):
    """Record the outcome of one acceptance criterion (by number) for the summary."""

    def record(number, ok, detail=""):
        prev = _ACCEPTANCE.get(number, (True, []))
        details = prev[1] + ([detail] if detail else [])
        _ACCEPTANCE[number] = (prev[0] and bool(ok), details)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, details = _ACCEPTANCE[number]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}"
        if details:
            line += " (" + "; ".join(details) + ")"
        terminalreporter.write_line(line)
