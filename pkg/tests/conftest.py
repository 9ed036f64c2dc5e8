import numpy as np
import pytest

from emilink import LinkBudget, Scenario


@pytest.fixture
def budget():
    return LinkBudget()


@pytest.fixture
def scenario():
    return Scenario()


def random_unit_diag_psd(rng, n):
    """Random Hermitian PSD matrix normalized to a unit diagonal."""
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = a @ a.conj().T + n * np.eye(n)
    d = np.sqrt(np.real(np.diag(m)))
    return m / np.outer(d, d)


def random_complex(rng, n, scale=1.0):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
