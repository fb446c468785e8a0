import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def out_dir(tmp_path, monkeypatch):
    """Output root for harness runs, isolated per test."""
    root = tmp_path / "results"
    monkeypatch.setenv("MLEV_ES_OUTPUT_DIR", str(root))
    return root
