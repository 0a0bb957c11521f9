"""Build script: compiles the optional C accelerator for the hot kernels.

The package works without the extension (a pure-Python implementation of the
same kernels is selected at import time), so a failing build of _kernels is
downgraded to a warning rather than an install failure.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler, broken toolchain, ...
            warnings.warn(f"building enkit._kernels failed ({exc}); "
                          "falling back to the pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"building {ext.name} failed ({exc}); "
                          "falling back to the pure-Python kernels")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("enkit._kernels", ["src/enkit/_kernels.pyx"])
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
