import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from whcryst import load_group  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def catalog():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_group(f"catalog:{name}")
        return cache[name]
    return get


@pytest.fixture(scope="session")
def data_dir():
    return DATA


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
