import numpy as np
import pytest

from pairaug import AlignedPair, Image


@pytest.fixture
def random_pair():
    def make(seed=0, size=24, channels=3, scale=1):
        r = np.random.default_rng(seed)
        target = Image(r.random((size, size, channels)).astype(np.float32))
        inp = Image(r.random((size, size, channels)).astype(np.float32))
        return AlignedPair(input=inp, target=target, scale=scale)

    return make
