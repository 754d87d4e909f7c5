"""Select the term kernels: compiled if importable, else pure Python.

Set ``COBRING_PURE=1`` to force the fallback.
"""

import os

if os.environ.get("COBRING_PURE", "") not in ("", "0"):
    from . import _pykernels as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels

        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as kernels

        BACKEND = "python"

mono_mul = kernels.mono_mul
poly_mul = kernels.poly_mul
axpy = kernels.axpy
lattice_reduce = kernels.lattice_reduce
NO_CAP = kernels.NO_CAP

__all__ = ["BACKEND", "kernels", "mono_mul", "poly_mul", "axpy", "lattice_reduce", "NO_CAP"]
