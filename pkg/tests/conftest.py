import numpy as np
import pytest

from threebody1d import (
    ContactInteraction,
    HarmonicInteraction,
    HarmonicTrap,
    InverseSquareInteraction,
    ModelSpec,
    NoInteraction,
    analytic_spectrum,
)


@pytest.fixture(scope="session")
def harmonic_sigma1():
    return analytic_spectrum(HarmonicTrap(1.0), 24)


@pytest.fixture(scope="session")
def spec_noninteracting():
    return ModelSpec(HarmonicTrap(1.0), NoInteraction())


@pytest.fixture(scope="session")
def spec_harm_harm():
    return ModelSpec(HarmonicTrap(1.0), HarmonicInteraction(0.5))


@pytest.fixture(scope="session")
def spec_calogero():
    return ModelSpec(HarmonicTrap(1.0), InverseSquareInteraction(1.0))


@pytest.fixture(scope="session")
def spec_unitary():
    return ModelSpec(HarmonicTrap(1.0), ContactInteraction(unitary=True))


def brute_force_ordered_triples(eps, e_max):
    """Independent enumeration oracle: all ordered triples with E <= e_max."""
    eps = np.asarray(eps)
    out = []
    n = len(eps)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                e = eps[a] + eps[b] + eps[c]
                if e <= e_max + 1e-12:
                    out.append((float(e), (a, b, c)))
    return out
