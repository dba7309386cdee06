import zlib

import pytest

from collapse_gauge.montecarlo import stream


@pytest.fixture
def rng(request):
    # one reproducible substream per test
    return stream(20240611, zlib.crc32(request.node.name.encode()))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
