import pytest

_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion.

    Call ``criterion(number, title, passed, detail)`` once per criterion; the
    lines are echoed immediately and repeated in the terminal summary.
    """

    def record(number, title, passed, detail=""):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number:>2}: {title}" + (f" [{detail}]" if detail else "")
        _ACCEPTANCE.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE, key=lambda x: x[0]):
        terminalreporter.write_line(line)
