import pytest

_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""

    def record(number, ok, title, detail=""):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        _VERDICTS.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
