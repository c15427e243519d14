import pytest

from schemas.deformation import DeformationParameter


def param(q: float) -> DeformationParameter:
    return DeformationParameter(q=q)


@pytest.fixture
def classical() -> DeformationParameter:
    return param(1.0)


@pytest.fixture
def compact() -> DeformationParameter:
    return param(0.5)


@pytest.fixture
def heavy() -> DeformationParameter:
    return param(1.5)
