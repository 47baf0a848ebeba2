import numpy as np
import pytest

from dmdstego.codebook import build_codebook


@pytest.fixture(scope="session")
def codebook():
    """Default-assignment codebook, built once per session."""
    return build_codebook()


@pytest.fixture(scope="session")
def synthetic_object():
    """Deterministic 96x96 test object with a few bright rectangles."""
    img = np.zeros((96, 96), dtype=np.uint8)
    img[20:70, 30:80] = 200
    img[40:50, 10:25] = 255
    img[75:90, 55:90] = 120
    return img
