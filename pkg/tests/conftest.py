import os

import pytest

from isogreen.liedata import TableCache


@pytest.fixture(scope="session")
def cache(tmp_path_factory):
    """Class tables fitted once per session; reuses ISOGREEN_CACHE when set."""
    path = os.environ.get("ISOGREEN_CACHE") or str(tmp_path_factory.mktemp("liedata") / "cache.json")
    return TableCache(path)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
