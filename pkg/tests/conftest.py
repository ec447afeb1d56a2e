import numpy as np
import pytest

from ldgp import GrayImage


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def random_image(rng, height, width, low=0, high=256):
    return GrayImage(rng.integers(low, high, size=(height, width), dtype=np.int64))


def write_pgm_p5(path, width, height, samples):
    path.write_bytes(f"P5\n{width} {height}\n255\n".encode() + bytes(samples))
