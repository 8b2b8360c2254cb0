import pytest

from fernhex.config import FernhexConfig, set_config
from fernhex.metrics import reset_metrics

ENV_VARS = ("FERNHEX_CONFIG", "FERNHEX_DP_WIDTH_CAP", "FERNHEX_RYSER_CAP", "FERNHEX_STORAGE")


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    set_config(FernhexConfig())
    reset_metrics()
    yield
    set_config(None)
    reset_metrics()
