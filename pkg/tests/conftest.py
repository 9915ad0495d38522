import itertools

import pytest

ACCEPTANCE_LINES: list[str] = []


def colex_sorted(n, r):
    """All r-subsets of range(n) in colex order, built independently of the package."""
    return sorted(itertools.combinations(range(n), r), key=lambda c: c[::-1])


@pytest.fixture
def acceptance_log():
    def log(criterion: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f" :: {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
