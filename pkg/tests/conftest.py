"""Shared spec builders for the test suite.

Builders construct systems directly; the *_config fixtures load the bundled
gallery files so tests exercise the same artifacts the CLI ships with.
"""

import pytest

from qht.baths import BathSpec
from qht.config import load_config
from qht.model import InteractionKind, QubitSpec, SystemSpec


def make_spec(kind, g, energies, alphas, temperatures, cutoffs=None, **kwargs):
    cutoffs = cutoffs or [1e3] * len(energies)
    qubits = tuple(
        QubitSpec(e, BathSpec(a, c, t))
        for e, a, c, t in zip(energies, alphas, cutoffs, temperatures)
    )
    return SystemSpec(kind=kind, g=g, qubits=qubits, **kwargs)


def all_flip_spec(tau3=3.0):
    """Three-qubit network with the all-flip interaction, cold third bath varied."""
    return make_spec(
        InteractionKind.Q3_111_000,
        0.5,
        (1.0, 2.0, -3.0),
        (1e-4, 1e-5, 1e-3),
        (1.0, 2.0, tau3),
    )


def middle_flip_spec(tau3=2.0):
    """Middle-flip network with hot outer baths."""
    return make_spec(
        InteractionKind.Q3_101_010,
        0.5,
        (1.0, 2.0, 1.0),
        (1e-4, 1e-5, 1e-3),
        (3.0, 2.5, tau3),
    )


def transient_spec():
    """Middle-flip network that steps down only transiently."""
    return make_spec(
        InteractionKind.Q3_101_010,
        0.5,
        (2.0, 1.4, -0.6),
        (1e-4, 1e-5, 1e-3),
        (1.0, 2.0, 3.0),
    )


def four_qubit_spec(tau4=3.5):
    """Four-qubit alternating-flip network."""
    return make_spec(
        InteractionKind.Q4_1010_0101,
        0.5,
        (1.0, 2.0, 3.0, 2.0),
        (1e-4, 1e-5, 1e-3, 1e-2),
        (1.0, 2.0, 3.0, tau4),
    )


ALL_BUILDERS = {
    "all_flip": all_flip_spec,
    "middle_flip": middle_flip_spec,
    "transient": transient_spec,
    "four_qubit": four_qubit_spec,
}


@pytest.fixture(scope="session")
def gallery_spec():
    """Load a bundled gallery config by name and return its SystemSpec."""

    def load(name):
        return load_config(name).system

    return load
