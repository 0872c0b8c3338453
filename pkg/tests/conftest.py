import pytest

from oztal.core import LocalizerConfig


@pytest.fixture
def default_cfg():
    return LocalizerConfig()
