import numpy as np
import pytest

from helpers import synthetic_image


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {name}: {status}")


@pytest.fixture(scope="session")
def fixture_images():
    """Twenty deterministic 360x360 synthetic colour images."""
    return [synthetic_image(seed) for seed in range(20)]


@pytest.fixture(scope="session")
def small_fixture_images():
    """Ten deterministic 96x96 images for cheap whole-pipeline tests."""
    return [synthetic_image(100 + seed, 96, 96) for seed in range(10)]


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
