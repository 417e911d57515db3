"""Build script: compiles the optional term-arithmetic extension.

The package is fully functional without the extension (a pure-Python twin
of the kernel is selected at import when the compiled module is missing),
so any compiler failure degrades to a pure-Python install instead of
aborting.  Set COCHAIN_NO_EXTENSION=1 to skip the compile step entirely.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing toolchain
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "WARNING: compiled kernel build failed (%s); "
            "falling back to the pure-Python kernel" % exc,
            file=sys.stderr,
        )


if os.environ.get("COCHAIN_NO_EXTENSION"):
    ext_modules = []
else:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "cochain._kernels._ckernel",
                ["src/cochain/_kernels/_ckernel.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
