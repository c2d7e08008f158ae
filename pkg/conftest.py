import numpy as np
import pytest

from algebra_core import Multivector, metric_new
from models import MetricKind
from moebius import plane_metric


@pytest.fixture
def rng():
    """Gerador com semente fixa"""
    return np.random.default_rng(20240611)


@pytest.fixture
def mixed_metric():
    """Métrico com quadrados positivo, negativo, nulo e não unitário"""
    return metric_new([1.0, -1.0, 0.0, 2.0])


@pytest.fixture
def metric_3():
    return metric_new([1.0, -1.0, 0.0])


@pytest.fixture(params=list(MetricKind), ids=lambda k: k.label)
def kind(request):
    """Parametriza o teste pelas três geometrias"""
    return request.param


@pytest.fixture
def random_mv(rng):
    """Fábrica de multivetores aleatórios"""
    def make(metric):
        return Multivector(metric, tuple(rng.normal(size=1 << metric.n).tolist()))
    return make


@pytest.fixture
def elliptic_metric():
    return plane_metric(MetricKind.ELLIPTIC)


@pytest.fixture
def parabolic_metric():
    return plane_metric(MetricKind.PARABOLIC)


@pytest.fixture
def hyperbolic_metric():
    return plane_metric(MetricKind.HYPERBOLIC)
