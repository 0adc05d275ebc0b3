import numpy as np
import pytest

from enose.dataset import Dataset, stratified_split
from enose.synth import default_spec, generate


@pytest.fixture(scope="session")
def tiny_drifted():
    """100 samples/class, drift enabled."""
    return generate(default_spec(100, 0))


@pytest.fixture(scope="session")
def tiny_split(tiny_drifted):
    return stratified_split(tiny_drifted, 0.2, 7)


def make_dataset(X, y, n_classes=None, names=None):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    C = n_classes or int(y.max()) + 1
    feature_names = names or tuple(f"f{i}" for i in range(X.shape[1]))
    return Dataset(tuple(feature_names), X, y, tuple(f"c{i}" for i in range(C)))
