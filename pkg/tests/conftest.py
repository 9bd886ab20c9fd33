import json

import pytest
from sympy.polys.domains import QQ

from vir25.category import standard_duality_data
from vir25.config import get_settings
from vir25.correlator import rigidity_contexts
from vir25.main import run
from vir25.verma import HWModuleDescriptor, simple_module


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("VIR25_SERIES_ORDER", "VIR25_LOG_LEVEL", "VIR25_OUTPUT_FORMAT"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def verma_21():
    return HWModuleDescriptor.verma(25, QQ(-5, 4))


@pytest.fixture(scope="session")
def verma_31():
    return HWModuleDescriptor.verma(25, -3)


@pytest.fixture(scope="session")
def l21():
    return simple_module(-1, 2, 1)


@pytest.fixture(scope="session")
def l31():
    return simple_module(-1, 3, 1)


@pytest.fixture(scope="session")
def contexts():
    return rigidity_contexts(QQ(1, 2))


@pytest.fixture
def duality_data():
    return standard_duality_data()


@pytest.fixture
def cli():
    """Run the command line in-process; returns (exit status, parsed JSON document)."""
    def invoke(*argv):
        result, code, rendered = run(list(argv))
        try:
            document = json.loads(rendered)
        except json.JSONDecodeError:
            document = rendered
        return code, document
    return invoke
