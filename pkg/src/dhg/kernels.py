"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the numpy
fallback. ``use_backend`` switches explicitly, which the benchmark and the
cross-backend tests rely on.
"""
from contextlib import contextmanager

from . import _kernels_py
from .errors import ParameterError

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BIG = _kernels_py.BIG
_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

_active = _compiled if _compiled is not None else _kernels_py


def available():
    return sorted(_BACKENDS)


def backend():
    return "cython" if _active is _compiled and _compiled is not None else "python"


def set_backend(name):
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ParameterError(f"unknown or unavailable backend {name!r}") from None


@contextmanager
def use_backend(name):
    previous = backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def apsp(indptr, indices, n):
    return _active.apsp(indptr, indices, n)


def bottleneck_tables(dist, indptr, indices):
    return _active.bottleneck_tables(dist, indptr, indices)


def delta_scan(dist, F, G):
    return _active.delta_scan(dist, F, G)


def b_profile(dist, rmax):
    return _active.b_profile(dist, rmax)


def cover_scan(dist, F, G):
    return _active.cover_scan(dist, F, G)
