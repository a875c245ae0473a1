"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; otherwise the
pure-Python kernels take over. Both produce bit-identical results. Set the
environment variable ZENOLINK_BACKEND to "py" or "c" before import to force
one side; forcing the compiled backend raises when the extension is absent.
"""

import os

from . import _kernels_py

_CHOICE = os.environ.get("ZENOLINK_BACKEND", "auto").strip().lower() or "auto"

if _CHOICE == "auto":
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _kernels_py
elif _CHOICE in ("c", "compiled", "ext", "extension"):
    try:
        from . import _kernels as kernels
    except ImportError as exc:
        raise ImportError(
            "ZENOLINK_BACKEND=%r requested the compiled kernels but the "
            "extension is not built; install with a C compiler or unset the "
            "variable" % _CHOICE
        ) from exc
elif _CHOICE in ("py", "python", "pure"):
    kernels = _kernels_py
else:
    raise ValueError(
        "unrecognized ZENOLINK_BACKEND value %r; use 'c', 'py', or 'auto'" % _CHOICE
    )

BACKEND_NAME = "compiled" if kernels.BACKEND == "compiled" else "python"
