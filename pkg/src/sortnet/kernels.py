"""Kernel selection: compiled Cython core if importable, numpy otherwise.

Set ``SORTNET_PURE=1`` to force the numpy fallback.
"""
import os

from sortnet import _fallback

if os.environ.get("SORTNET_PURE"):
    _impl = _fallback
else:
    try:
        from sortnet import _kernels as _impl
    except ImportError:
        _impl = _fallback

IMPLEMENTATION = "cython" if _impl is not _fallback else "numpy"
RELEASES_GIL = IMPLEMENTATION == "cython"

apply_network = _impl.apply_network
first_failure = _impl.first_failure
output_codes = _impl.output_codes
