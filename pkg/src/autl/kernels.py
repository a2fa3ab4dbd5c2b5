"""Selects the compiled search kernel when available.

Set ``AUTL_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
import os

from . import _search_py

DONE = _search_py.DONE
CAP_EXCEEDED = _search_py.CAP_EXCEEDED
TIMED_OUT = _search_py.TIMED_OUT
LIMIT_REACHED = _search_py.LIMIT_REACHED

compiled_search = None
if not os.environ.get("AUTL_PURE_PYTHON"):
    try:
        from ._search import search as compiled_search
    except ImportError:  # extension not built
        compiled_search = None

python_search = _search_py.search
search = compiled_search or python_search
BACKEND = "cython" if compiled_search is not None else "python"
