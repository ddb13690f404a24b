"""Hot-path kernels with a compiled core and a numpy fallback.

The backend is chosen once, at import time: the Cython extension when it
built successfully, otherwise the numpy reference. Set the environment
variable ``STYLELAB_PURE_PYTHON=1`` to force the fallback (useful for
benchmarking and for debugging suspected kernel issues).
"""

import os

from . import pyref as _pyref

if os.environ.get("STYLELAB_PURE_PYTHON", "").strip() in ("", "0"):
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pyref
else:
    _impl = _pyref

BACKEND = _impl.BACKEND

log_softmax = _impl.log_softmax
contrastive_loss_grad = _impl.contrastive_loss_grad
softmax_xent_grad = _impl.softmax_xent_grad
mean_pool_forward = _impl.mean_pool_forward
mean_pool_backward = _impl.mean_pool_backward
adam_update = _impl.adam_update

__all__ = [
    "BACKEND",
    "log_softmax",
    "contrastive_loss_grad",
    "softmax_xent_grad",
    "mean_pool_forward",
    "mean_pool_backward",
    "adam_update",
]
