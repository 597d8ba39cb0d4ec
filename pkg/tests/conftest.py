import pytest

import ioncool as ic


@pytest.fixture(scope="session")
def chain15_positions():
    return ic.solve_equilibrium(ic.REFERENCE_POTENTIAL, 15)


@pytest.fixture(scope="session")
def spectrum15(chain15_positions):
    return ic.spectrum_for(ic.REFERENCE_POTENTIAL, chain15_positions)


@pytest.fixture(scope="session")
def k15(chain15_positions):
    return -ic.hessian(ic.REFERENCE_POTENTIAL, chain15_positions)


@pytest.fixture(scope="session")
def centered_pair15():
    """Coolant indices for labels (-1, 0) in the 15-ion chain."""
    return frozenset({6, 7})


@pytest.fixture(scope="session")
def heating_model():
    return ic.reference_heating_model()


@pytest.fixture(scope="session")
def kappa():
    return ic.reference_kappa()


def quadratic_chain(n, x2=0.003):
    pot = ic.TrapPotential(x2=x2, x4=0.0)
    u = ic.solve_equilibrium(pot, n)
    return pot, u
