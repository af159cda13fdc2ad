import numpy as np
import pytest

from arbfscaffold import samples


@pytest.fixture
def tri_mesh():
    return samples.triangle_mesh()


@pytest.fixture
def tet_mesh():
    return samples.unit_tet_mesh()


@pytest.fixture(scope="session")
def regular_tet():
    return samples.regular_tet_mesh()


@pytest.fixture
def hex_mesh():
    return samples.unit_hex_mesh()


@pytest.fixture(scope="session")
def block_mesh():
    return samples.hex_block_mesh()


@pytest.fixture(scope="session")
def icosa_mesh():
    return samples.icosahedron_tet_mesh()


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)
