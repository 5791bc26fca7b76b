from os import path

import pytest

import witbench


@pytest.fixture
def path_to_witbench():
    """path to installed witbench module."""
    return path.dirname(witbench.__file__)
