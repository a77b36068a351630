"""Pytest configuration and fixtures."""
import sys
from pathlib import Path

import pytest

# Add the project root to the Python path so imports work
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from perimeter_app.lib.settings import clear_settings_cache  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per process; re-read the environment around every test."""
    clear_settings_cache()
    yield
    clear_settings_cache()
