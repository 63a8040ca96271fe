"""Hot inner loops of the solver with two interchangeable backends.

The numba backend is the default.  Set ``DELAMSHELL_NUMBA=0`` in the
environment to select the pure-numpy fallback (same signatures, same
results); this is also what the kernel benchmark uses to compare the two.
"""

import os

_flag = os.environ.get("DELAMSHELL_NUMBA", "1").strip().lower()
_want_numba = _flag not in ("0", "false", "no", "off")

if _want_numba:
    try:
        from ._numba_backend import (ce_evaluate, ce_stiffness, ce_tangent,
                                     ce_fint, elem_fint, scatter_dofs,
                                     csr_scatter)
        BACKEND = "numba"
    except ImportError:
        _want_numba = False

if not _want_numba:
    from ._numpy_backend import (ce_evaluate, ce_stiffness, ce_tangent,
                                 ce_fint, elem_fint, scatter_dofs,
                                 csr_scatter)
    BACKEND = "numpy"

__all__ = ["BACKEND", "ce_evaluate", "ce_stiffness", "ce_tangent", "ce_fint",
           "elem_fint", "scatter_dofs", "csr_scatter"]
