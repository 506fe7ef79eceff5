"""Search-kernel selection: compiled extension when available, pure Python otherwise.

Set ARCGEO_KERNEL=py to force the pure-Python kernel (e.g. for benchmarking);
ARCGEO_KERNEL=c insists on the compiled one and raises if it is missing.
"""

import os

from . import _kernel_py


def _load_compiled():
    try:
        from . import _kernel_cy
    except ImportError:
        return None
    return _kernel_cy


def available_kernels():
    """Name -> module for every kernel importable in this environment."""
    kernels = {"python": _kernel_py}
    compiled = _load_compiled()
    if compiled is not None:
        kernels["compiled"] = compiled
    return kernels


_choice = os.environ.get("ARCGEO_KERNEL", "").lower()
if _choice in ("py", "python", "pure"):
    _impl = _kernel_py
elif _choice in ("c", "cy", "compiled"):
    _impl = _load_compiled()
    if _impl is None:
        raise ImportError("ARCGEO_KERNEL requested the compiled kernel, but it is not built")
else:
    _impl = _load_compiled() or _kernel_py

KERNEL_NAME = _impl.KERNEL_NAME
search_completions = _impl.search_completions
canonical_arc_key = _impl.canonical_arc_key
