"""Enumeration kernel selection: compiled C core with a NumPy fallback.

``BACKEND`` records which implementation is active ("compiled" or
"fallback").  Set COMPASSCOH_FORCE_FALLBACK=1 to skip the C kernel, e.g.
for benchmarking the two against each other.
"""

import os

if os.environ.get("COMPASSCOH_FORCE_FALLBACK"):
    from .fallback import count_table
    BACKEND = "fallback"
else:
    try:
        from ._enum_core import count_table  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        from .fallback import count_table  # type: ignore[no-redef]
        BACKEND = "fallback"

__all__ = ["count_table", "BACKEND"]
