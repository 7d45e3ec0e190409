# SPDX-License-Identifier: MIT
import pytest

from src.main.app.config import load_config

# fastlib.logging reads the log section on import, so configuration has to be
# loaded before any module that imports the logger
load_config("test")

from src.main.app.service.impl.classify_service_impl import ClassifyServiceImpl
from src.main.app.service.impl.closedform_service_impl import ClosedFormServiceImpl
from src.main.app.service.impl.determining_service_impl import DeterminingServiceImpl
from src.main.app.service.impl.numverify_service_impl import NumverifyServiceImpl
from src.main.app.service.impl.reduce_service_impl import ReduceServiceImpl


@pytest.fixture(autouse=True)
def test_config():
    load_config("test")


@pytest.fixture
def determining() -> DeterminingServiceImpl:
    return DeterminingServiceImpl()


@pytest.fixture
def classifier() -> ClassifyServiceImpl:
    return ClassifyServiceImpl()


@pytest.fixture
def reducer() -> ReduceServiceImpl:
    return ReduceServiceImpl()


@pytest.fixture
def closedform() -> ClosedFormServiceImpl:
    return ClosedFormServiceImpl()


@pytest.fixture
def numverify() -> NumverifyServiceImpl:
    return NumverifyServiceImpl()
