from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gatkit.stdlib import load_stdlib  # noqa: E402


@pytest.fixture(scope="session")
def reg():
    return load_stdlib()


@pytest.fixture
def scratch(reg):
    """A registry holding only the stdlib theories, for declaring new maps."""
    from gatkit.surface import Registry

    r = Registry()
    for name, g in reg.items("theory"):
        r.add(name, g)
    return r
