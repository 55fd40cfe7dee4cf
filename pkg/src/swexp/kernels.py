"""Backend selection for the hot kernels.

The compiled extension is used when it imports cleanly; otherwise, or when
``SWEXP_PURE_PYTHON=1`` is set, the numpy fallback is used.  Both expose the
same three functions with identical semantics.
"""
from __future__ import annotations

import os

from . import _fallback

if os.environ.get("SWEXP_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _fallback

BACKEND: str = _impl.BACKEND
rc_value_grad = _impl.rc_value_grad
ex_value_grad = _impl.ex_value_grad
sequence_error_probs = _impl.sequence_error_probs

__all__ = ["BACKEND", "rc_value_grad", "ex_value_grad", "sequence_error_probs"]
