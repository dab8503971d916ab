"""Select the countermodel search backend at import time.

The compiled ``_search`` extension is used when it was built; otherwise the
pure-Python twin.  Setting ``RECMODAL_PURE_PYTHON=1`` forces the fallback.
"""

import importlib
import os

from . import _search_py

BACKENDS = ("cython", "python")


def load_backend(name):
    if name == "python":
        return _search_py.search
    if name == "cython":
        return importlib.import_module("recmodal._search").search
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    out = []
    for name in BACKENDS:
        try:
            load_backend(name)
        except ImportError:
            continue
        out.append(name)
    return out


if os.environ.get("RECMODAL_PURE_PYTHON"):
    BACKEND = "python"
else:
    try:
        load_backend("cython")
        BACKEND = "cython"
    except ImportError:
        BACKEND = "python"

search = load_backend(BACKEND)
