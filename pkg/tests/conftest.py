import os
import shutil
from pathlib import Path

import hypothesis
import pytest

from specgen import data_path

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("dev", max_examples=50, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "dev"))

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDENS = HERE / "goldens"


@pytest.fixture
def toy_root() -> Path:
    return Path(str(data_path("toy_abs")))


@pytest.fixture
def toy_copy(tmp_path, toy_root) -> Path:
    """Writable copy of the bundled toy project."""
    dst = tmp_path / "toy"
    shutil.copytree(toy_root, dst)
    return dst


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE: list[str] = []


def verdict(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
