import numpy as np
import pytest

from rfq.sequence import WaveletSequence

# Small sequence with one heavy element; most frozen expectations use it.
CANON = [1, 2, 3, 1, 4, 1, 5, 1, 2, 3, 1]


@pytest.fixture
def canon():
    return list(CANON)


@pytest.fixture(scope="session")
def canon_seq():
    return WaveletSequence.build(np.asarray(CANON, dtype=np.int64))
