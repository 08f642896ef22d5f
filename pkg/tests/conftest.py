import sys

import pytest

from docbot.textprep import PosTagger, load_abbreviations


def pytest_terminal_summary(terminalreporter):
    """Replay the acceptance criterion lines after the run."""
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "REPORT_LINES", None) if module else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def tagger() -> PosTagger:
    return PosTagger.from_file()


@pytest.fixture(scope="session")
def abbreviations() -> tuple[str, ...]:
    return load_abbreviations()
