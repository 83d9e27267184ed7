"""
Shared fixtures: fields, small named algebras and the JSON fixture documents
"""
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from src.ainfty import ShiftedAInftyAlgebra
from src.generators import acyclic_abelian, truncated_polynomial, upper_triangular, z4_regression
from src.linalg import get_field
from src.logging_config import configure_logging

FIXTURES = Path(__file__).parent / "fixtures"

# Exact computations are slow per example; keep hypothesis runs short.
# Fixtures here build immutable structures, so reuse across examples is safe.
hypothesis_settings.register_profile(
    "engine",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
hypothesis_settings.load_profile("engine")

# Route logs to stderr before any module logs; CLI tests parse stdout.
configure_logging("WARNING")


@pytest.fixture
def fixture_path():
    """Path of a file in tests/fixtures"""
    def _path(name: str) -> Path:
        return FIXTURES / name
    return _path


@pytest.fixture
def f2():
    return get_field(2)


@pytest.fixture
def f3():
    return get_field(3)


@pytest.fixture
def qq():
    return get_field(0)


@pytest.fixture
def z4_algebra() -> ShiftedAInftyAlgebra:
    """t·𝔽₂[t]/(t³) with |t| = 0, shifted"""
    return z4_regression().shifted


@pytest.fixture
def heisenberg_algebra() -> ShiftedAInftyAlgebra:
    """Strictly upper triangular 3×3 matrices over 𝔽₂, all in degree 0"""
    return upper_triangular(get_field(2), 3, [0, 0, 0]).shifted


@pytest.fixture
def acyclic_f2():
    """kx → ky over 𝔽₂, kx in shifted degree -1"""
    return acyclic_abelian(get_field(2), -1, 1, 3)


@pytest.fixture
def polynomial_degree_one():
    """t·𝔽₃[t]/(t³) with |t| = 1 (unshifted), so t sits in shifted degree 0"""
    return truncated_polynomial(get_field(3), 3, 1)
