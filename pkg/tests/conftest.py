from __future__ import annotations

import json
from pathlib import Path

import pytest

from aglab import _kernels_py
from aglab.harness import example_fixture
from aglab.magma import constant_magma, cyclic_group, left_zero_magma

GOLDEN = Path(__file__).parent / "golden"

try:
    from aglab import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

KERNELS = [pytest.param(_kernels_py, id="python")]
if _compiled is not None:
    KERNELS.append(pytest.param(_compiled, id="cython"))


@pytest.fixture(params=KERNELS)
def kernels(request):
    return request.param


@pytest.fixture
def example():
    return example_fixture()


@pytest.fixture
def z2():
    return cyclic_group(2)


@pytest.fixture
def const2():
    return constant_magma(2)


@pytest.fixture
def leftzero2():
    return left_zero_magma(2)


@pytest.fixture(scope="session")
def golden_counts():
    return json.loads((GOLDEN / "counts.json").read_text())


def golden_keys(name: str) -> list[str]:
    return (GOLDEN / name).read_text().split()
