import pytest

from gapdet import solve_hm


@pytest.fixture(scope="session")
def hm():
    """One boundary-value solve shared by every test that needs the potential."""
    return solve_hm()
