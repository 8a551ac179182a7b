"""Hot-loop kernels: compiled extension when available, numpy fallback otherwise.

Set KOROBOX_PURE=1 to force the fallback (used by the parity tests and the
benchmark).  ``BACKEND`` names the active implementation.
"""

import os

from . import fallback

if os.environ.get("KOROBOX_PURE") == "1":
    _impl = fallback
    BACKEND = "fallback"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = fallback
        BACKEND = "fallback"

enumerate_members = _impl.enumerate_members
count_members = _impl.count_members
cbc_scan = _impl.cbc_scan

__all__ = ["BACKEND", "enumerate_members", "count_members", "cbc_scan", "fallback"]
