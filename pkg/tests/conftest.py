import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

from matgen.linalg import IntMatrix  # noqa: E402


@pytest.fixture
def XY():
    def make(n):
        return IntMatrix.shift(n), IntMatrix.unit(n, 1, 1)

    return make


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
