import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import pytest

from tannaka_forge.rings import ring_make
from tannaka_forge.algebra import AlgebraSpec


@pytest.fixture(scope="session")
def Z8():
    return ring_make(2, 3, 1)


@pytest.fixture(scope="session")
def Z4():
    return ring_make(2, 2, 1)


@pytest.fixture(scope="session")
def F2():
    return ring_make(2, 1, 1)


@pytest.fixture(scope="session")
def F4():
    return ring_make(2, 1, 2)


@pytest.fixture(scope="session")
def GR42():
    return ring_make(2, 2, 2)


@pytest.fixture(scope="session")
def alg_f2():
    return AlgebraSpec.make(2, 1, 1)


@pytest.fixture(scope="session")
def alg_f3():
    return AlgebraSpec.make(3, 1, 1)


@pytest.fixture(scope="session")
def alg_f4():
    return AlgebraSpec.make(2, 1, 2)


@pytest.fixture(scope="session")
def alg_gr42():
    return AlgebraSpec.make(2, 2, 2)
