"""Hot-kernel backend selection.

The compiled Cython extension is preferred when importable; otherwise the
NumPy implementations are used. Both expose the same three callables:
``adwin_scan``, ``chain_solve_r1`` and ``lw_linkage``. The active backend
name is exported as ``BACKEND`` ("compiled" or "numpy").
"""

from . import numpy_impl
from .numpy_impl import AVERAGE, CENTROID, COMPLETE, MEDIAN, SINGLE, WARD, WEIGHTED

try:
    from . import _speedups

    _impl = _speedups
    BACKEND = "compiled"
except ImportError:  # extension not built: NumPy fallback
    _impl = numpy_impl
    BACKEND = "numpy"

adwin_scan = _impl.adwin_scan
chain_solve_r1 = _impl.chain_solve_r1
lw_linkage = _impl.lw_linkage

__all__ = [
    "BACKEND", "adwin_scan", "chain_solve_r1", "lw_linkage",
    "SINGLE", "COMPLETE", "AVERAGE", "WEIGHTED", "CENTROID", "MEDIAN", "WARD",
    "numpy_impl",
]
