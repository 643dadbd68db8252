"""Shared fixtures: one default background/basis/generator set per session,
plus the small oracle grid used by the dense-matrix comparisons."""

import pytest

from dskerr.angular import angular_basis
from dskerr.geometry import SpacetimeParams, build_background
from dskerr.operators import assemble_generators


@pytest.fixture(scope="session")
def params():
    return SpacetimeParams(lambda_c=0.05, mass=1.0, spin=0.05, n=1)


@pytest.fixture(scope="session")
def chart(params):
    return build_background(params)


@pytest.fixture(scope="session")
def basis(params):
    return angular_basis(params, 24)


@pytest.fixture(scope="session")
def gens(params, chart, basis):
    return assemble_generators(params, chart, basis)


# the dense-oracle grid: axisymmetric massive mode so the small angular
# grid passes its own guard
@pytest.fixture(scope="session")
def tiny_params():
    return SpacetimeParams(lambda_c=0.05, mass=1.0, spin=0.05, n=0, m2=0.1)


@pytest.fixture(scope="session")
def tiny_chart(tiny_params):
    return build_background(tiny_params, x_max=8.0, n_x=48)


@pytest.fixture(scope="session")
def tiny_basis(tiny_params):
    return angular_basis(tiny_params, 8)


@pytest.fixture(scope="session")
def tiny_gens(tiny_params, tiny_chart, tiny_basis):
    return assemble_generators(tiny_params, tiny_chart, tiny_basis)
