import pytest

from witsenhausen.core import validate_params


@pytest.fixture(scope="session")
def params():
    """The study configuration used throughout: (Q, N) = (0.1, 0.01)."""
    return validate_params(0.1, 0.01)
