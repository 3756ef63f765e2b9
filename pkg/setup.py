"""Build the optional GMP kernel extension.

Set PCFLAB_NO_EXT=1 to skip it; the package then runs on the pure-Python
kernels.  A failed compile is reported and skipped rather than fatal.
"""
import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or headers missing
            print(f"warning: skipping GMP kernels ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc})", file=sys.stderr)


def extensions():
    if os.environ.get("PCFLAB_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available, using pure-Python kernels", file=sys.stderr)
        return []
    from setuptools import Extension

    ext = Extension(
        "pcflab._ckernels",
        sources=["src/pcflab/_ckernels.pyx"],
        libraries=["gmp"],
        extra_compile_args=["-O2"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"}, quiet=True)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
