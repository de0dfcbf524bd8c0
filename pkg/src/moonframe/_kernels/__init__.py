"""Kernel backend selection.

The two inner loops that dominate runtime (codeword enumeration over
Z_2k^r information symbols and lattice vector enumeration) have a compiled
Cython implementation and a pure-Python twin with identical semantics.
The compiled module is used when the extension built; set the environment
variable MOONFRAME_PURE=1 to force the pure kernels.
"""

import os

from . import pure

try:
    from . import _fast
except ImportError:  # extension not built; pure fallback
    _fast = None

HAVE_FAST = _fast is not None


def get_backend(name=None):
    """Return the kernel module: 'fast', 'pure', or None for the default."""
    if name is None:
        name = "pure" if os.environ.get("MOONFRAME_PURE") else (
            "fast" if HAVE_FAST else "pure")
    if name == "fast":
        if _fast is None:
            raise RuntimeError("compiled kernels are not available")
        return _fast
    if name == "pure":
        return pure
    raise ValueError(f"unknown kernel backend {name!r}")
