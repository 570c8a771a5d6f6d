import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from prpq.graph import load_graph_file  # noqa: E402

settings.register_profile(
    "default", deadline=None, max_examples=150,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

FRIENDS_PATTERN = (
    "([Person, ?p <= age && ?q >= age && ?q - ?p <= 7] / [follow, since > 2019])*"
    " / [Person, ?p <= age && ?q >= age && ?q - ?p <= 7]"
)


@pytest.fixture(scope="session")
def social():
    return load_graph_file(os.path.join(FIXTURES, "social.pg"))


@pytest.fixture(scope="session")
def social_path():
    return os.path.join(FIXTURES, "social.pg")


# one line per acceptance criterion, repeated in the terminal summary
_CRITERIA: dict[int, str] = {}


class _Recorder:
    def __call__(self, number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        _CRITERIA[number] = line
        print(line)


@pytest.fixture(scope="session")
def criterion():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
