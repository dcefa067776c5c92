import pytest

from primeforms.core import sieve
from primeforms.sieve_identity import precision_probe


@pytest.fixture(scope="session")
def table():
    """Full-size oracle: covers every sweep in the suite (p_100000 = 1299709)."""
    return sieve(2_000_000)


@pytest.fixture(scope="session")
def small_table():
    """Cheap oracle for exhaustive small-range checks."""
    return sieve(20_000)


@pytest.fixture(scope="session")
def certificates_500(table):
    """Exact certificates for n = 1..500, shared by the acceptance criteria."""
    return precision_probe(500, table)
