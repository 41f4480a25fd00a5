import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from klrkit.cartan import CartanDatum, standard_datum  # noqa: E402
from klrkit.klr import KLRContext, quiver_q_family  # noqa: E402

settings.register_profile("suite", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


@pytest.fixture(scope="session")
def sl2():
    return KLRContext(CartanDatum([[2]]))


@pytest.fixture(scope="session")
def a2():
    datum = standard_datum("A2")
    return KLRContext(datum, quiver_q_family(datum, {(1, 2): 1}))


@pytest.fixture(scope="session")
def b2():
    return KLRContext(CartanDatum([[2, -2], [-1, 2]]))
