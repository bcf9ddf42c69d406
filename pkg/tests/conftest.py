import pytest
from hypothesis import HealthCheck
from hypothesis import settings as hypothesis_settings

from app.config import settings
from app.model.data import draw_instance, synthesize_dataset
from app.model.models import NetworkSpec, NoiseSpec

# The autouse fixture below only redirects paths
hypothesis_settings.register_profile("ste", suppress_health_check=[HealthCheck.function_scoped_fixture], deadline=None)
hypothesis_settings.load_profile("ste")


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Keep metrics logs and default outputs inside the test's tmp dir."""
    monkeypatch.setattr(settings, "save_metrics", False)
    monkeypatch.setattr(settings, "logs_path", tmp_path / "logs")
    monkeypatch.setattr(settings, "output_dir", tmp_path / "results")
    monkeypatch.setattr(settings, "workers", 1)


@pytest.fixture
def small_spec() -> NetworkSpec:
    return draw_instance(m=3, n=4, seed=11)


@pytest.fixture
def small_data(small_spec):
    return synthesize_dataset(small_spec, N=5, noise=NoiseSpec(), seed=11)


@pytest.fixture
def noisy_data(small_spec):
    return synthesize_dataset(small_spec, N=32, noise=NoiseSpec(kind="gaussian", sigma=1.0), seed=5)
