import pytest

from tiltsperner import kernels
from tiltsperner.search import _cached_full_graph


@pytest.fixture(params=kernels.available())
def backend(request):
    before = kernels.current().NAME
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(before)


@pytest.fixture(autouse=True, scope="session")
def _clear_graph_cache():
    yield
    _cached_full_graph.cache_clear()
