import functools

import pytest

from cleftdga.geometry import builtin


@functools.lru_cache(maxsize=None)
def geometry(name: str):
    return builtin(name).build()


@pytest.fixture(params=["flat2", "diagpoly", "sphere2"])
def geom(request):
    return geometry(request.param)
