import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

import oracles  # noqa: E402


@pytest.fixture(scope="session")
def inessential_oracle():
    """n -> set of inessential masks, computed by enumerating factorizations."""
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = oracles.inessential_masks(n)
        return cache[n]
    return get


def pytest_terminal_summary(terminalreporter):
    lines = getattr(terminalreporter.config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
