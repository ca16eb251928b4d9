import pytest

from omloq.dynalg import DynAlgebra, SamplePolicy
from omloq.oml import catalog
from omloq.testmonoid import generate_T

CORPUS_SPECS = [
    ("chain2", 0),
    ("boolean", 1),
    ("boolean", 2),
    ("boolean", 3),
    ("boolean", 4),
    ("mo", 1),
    ("mo", 2),
    ("mo", 3),
    ("mo", 4),
]


@pytest.fixture(scope="session")
def corpus():
    return [catalog(name, k) for name, k in CORPUS_SPECS]


@pytest.fixture(scope="session")
def policy():
    return SamplePolicy()


@pytest.fixture(scope="session")
def algebra_for():
    """Shared DynAlgebra per catalog lattice; monoid generation is cheap but
    the sample caches attached to an algebra are worth reusing."""
    cache = {}

    def factory(name, k=0):
        if (name, k) not in cache:
            cache[(name, k)] = DynAlgebra(generate_T(catalog(name, k)))
        return cache[(name, k)]

    return factory
