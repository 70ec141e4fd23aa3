"""Select the kernel implementation at import time.

The compiled module is used when it was built; set ``WARPFT_PURE_PYTHON=1``
to force the numpy fallback.
"""
import os

import numpy as np

from warpft import _fallback

compiled = None
if not os.environ.get("WARPFT_PURE_PYTHON"):
    try:
        from warpft import _kernels as compiled
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else _fallback
BACKEND = "cython" if compiled is not None else "python"


def oscillatory_sum(src, tgt, coef, sign, threads=1, impl=None):
    """Direct oscillatory quadrature sum, see ``_kernels.oscillatory_sum``."""
    mod = _impl if impl is None else impl
    coef = np.asarray(coef, dtype=np.complex128)
    return mod.oscillatory_sum(
        np.ascontiguousarray(src, dtype=np.float64),
        np.ascontiguousarray(tgt, dtype=np.float64),
        np.ascontiguousarray(coef.real),
        np.ascontiguousarray(coef.imag),
        float(sign),
        int(threads),
    )


def gaussian_sum(src, tgt, coef, variance, threads=1, impl=None):
    """Unnormalised Gaussian convolution sum, see ``_kernels.gaussian_sum``."""
    mod = _impl if impl is None else impl
    return mod.gaussian_sum(
        np.ascontiguousarray(src, dtype=np.float64),
        np.ascontiguousarray(tgt, dtype=np.float64),
        np.ascontiguousarray(coef, dtype=np.float64),
        0.5 / float(variance),
        int(threads),
    )
