"""Backend selection for the hot counting/scoring kernels.

The compiled extension ``netavg._ext`` is used when it was built and importable;
otherwise the numpy implementation in ``netavg._fallback`` is used. Set
``NETAVG_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"

if os.environ.get("NETAVG_PURE_PYTHON") != "1":
    try:
        from . import _ext as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
else:
    _impl = _fallback

config_index = _impl.config_index
family_counts = _impl.family_counts
cross_counts = _impl.cross_counts
bdeu_from_counts = _impl.bdeu_from_counts
bdeu_score = _impl.bdeu_score

__all__ = [
    "BACKEND",
    "bdeu_from_counts",
    "bdeu_score",
    "config_index",
    "cross_counts",
    "family_counts",
]
