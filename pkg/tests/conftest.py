import mpmath
import pytest
from hypothesis import HealthCheck, settings

from ramf.numerics import PrecisionContext

settings.register_profile(
    "ramf", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("ramf")


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(256)


@pytest.fixture(scope="session")
def ctx128():
    return PrecisionContext(128)


@pytest.fixture(autouse=True)
def _low_global_precision():
    # library code must never depend on the global mpmath precision
    old = mpmath.mp.prec
    mpmath.mp.prec = 53
    yield
    mpmath.mp.prec = old


def close(a, b, tol):
    with mpmath.workprec(400):
        return abs(mpmath.mpc(a) - mpmath.mpc(b)) <= tol
