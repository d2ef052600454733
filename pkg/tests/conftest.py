import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def blob_dirs(tmp_path_factory):
    """Small on-disk synthetic dataset: 24 tumor + 24 healthy 32x32 PNGs."""
    from tumordetect.synthetic import write_blob_dataset

    root = tmp_path_factory.mktemp("blobs")
    return write_blob_dataset(root, 24, 24, side=32, seed=7)
