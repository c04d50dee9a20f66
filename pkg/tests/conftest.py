import loguru
import pytest
from hypothesis import settings

from qcat.arith import Parity, n_prime, validate_catmap
from qcat.heisenberg import build_propagator
from qcat.utils import configure_logging

settings.register_profile("qcat", deadline=None, max_examples=50)
settings.load_profile("qcat")


@pytest.fixture(scope="session")
def catmap():
    return validate_catmap(2, 3, 1, 2)


@pytest.fixture(scope="session")
def propagators(catmap):
    """Session-wide propagators of the default map, built once per `N`."""
    built = {}

    def get(N):
        if N not in built:
            built[N] = build_propagator(catmap, N)
        return built[N]

    return get


@pytest.fixture(scope="session")
def family(catmap, propagators):
    def get(k, parity=Parity.ODD):
        return propagators(n_prime(catmap, Parity(parity).q(k)))

    return get


@pytest.fixture(scope="session")
def m989(propagators):
    return propagators(989)


@pytest.fixture(scope="session")
def m1560(propagators):
    return propagators(1560)


@pytest.fixture
def log_records():
    records = []
    handler_id = loguru.logger.add(lambda message: records.append(message.record), level="TRACE")
    yield records
    loguru.logger.remove(handler_id)


@pytest.fixture(autouse=True)
def restore_logging():
    yield
    # CLI runs rebind the sink to a runner-owned stream
    configure_logging("WARNING")
