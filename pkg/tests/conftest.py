import pytest

from crchan import build_collective_system, construct_irrep_basis

_systems = {}
_decomps = {}


@pytest.fixture(scope="session")
def get_system():
    """Session-cached collective systems, keyed by (n, d)."""

    def _get(n, d=2):
        key = (n, d)
        if key not in _systems:
            _systems[key] = build_collective_system(n, d)
        return _systems[key]

    return _get


@pytest.fixture(scope="session")
def get_decomp(get_system):
    """Session-cached basis decompositions, keyed by (n, d)."""

    def _get(n, d=2):
        key = (n, d)
        if key not in _decomps:
            _decomps[key] = construct_irrep_basis(get_system(n, d))
        return _decomps[key]

    return _get
