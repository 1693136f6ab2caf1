"""Shared fixtures: canonical structures and a generic coefficient set.

Structures are immutable (read-only arrays), so session scope is safe.
"""
import pytest

from spaceform import FormCoefficients, standard_structure


@pytest.fixture(scope="session")
def space2():
    return standard_structure(2)


@pytest.fixture(scope="session")
def space3():
    return standard_structure(3)


@pytest.fixture(scope="session")
def generic():
    # all coefficient gates open: f2 != 0, f1 != f3, no boundary set hit
    return FormCoefficients(1.0, 0.5, 0.25)
