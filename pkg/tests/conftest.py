import io
from pathlib import Path

import pytest

import pollcast as pc

DATA = Path(pc.__file__).parent / "data"

TABLE1_CSV = (
    "date,agency,n,union,spd,greens,fdp,left,pirates,afd,others\n"
    "2013-09-20,Forsa,1995,40,26,10,5,9,2,4,4\n"
)

_acceptance_lines = []


@pytest.fixture(scope="session")
def config2013():
    return pc.ElectionConfig.load(DATA / "btw2013_config.json")


@pytest.fixture(scope="session")
def config2017():
    return pc.ElectionConfig.load(DATA / "btw2017_config.json")


@pytest.fixture(scope="session")
def table1_pooled(config2013):
    polls = pc.parse_polls(io.StringIO(TABLE1_CSV), config2013)
    return pc.pool_polls(polls, None, config2013.pooling)


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, text, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        _acceptance_lines.append(f"[{status}] criterion {number}: {text} {detail}".rstrip())
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
