import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
ROOT = HERE.parent
sys.path.insert(0, str(HERE))

from discwall.io import load_scene  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ov():
    return load_scene(ROOT / "scenes" / "ov.json")


@pytest.fixture(scope="session")
def pentagon():
    return load_scene(ROOT / "scenes" / "pentagon.json")


@pytest.fixture(scope="session")
def pm1():
    return load_scene(ROOT / "scenes" / "wall_pm1.json")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
