"""Build script: compiles the optional C enumeration kernel.

The package works without the extension (a vectorized NumPy fallback is
selected at import time), so any failure here degrades to a pure-Python
install instead of aborting.  Set COMPASSCOH_NO_EXT=1 to skip the extension
entirely.  The shipped ``_enum_core.c`` was generated with Cython; when
Cython is importable we regenerate it from the ``.pyx`` source instead.
"""

import os
import sys

from setuptools import setup
from setuptools.errors import CCompilerError, ExecError, PlatformError


def _extensions():
    if os.environ.get("COMPASSCOH_NO_EXT"):
        return []
    from setuptools import Extension

    src_c = os.path.join("src", "compasscoh", "_kernels", "_enum_core.c")
    src_pyx = os.path.join("src", "compasscoh", "_kernels", "_enum_core.pyx")
    ext = Extension("compasscoh._kernels._enum_core", [src_pyx])
    try:
        from Cython.Build import cythonize

        return cythonize([ext], language_level=3)
    except ImportError:
        if os.path.exists(src_c):
            return [Extension("compasscoh._kernels._enum_core", [src_c])]
        return []


def _setup(with_ext):
    setup(ext_modules=_extensions() if with_ext else [])


try:
    _setup(with_ext=True)
except (CCompilerError, ExecError, PlatformError, SystemExit) as exc:
    sys.stderr.write(f"compasscoh: C kernel build failed ({exc}); "
                     "installing with the NumPy fallback only\n")
    _setup(with_ext=False)
