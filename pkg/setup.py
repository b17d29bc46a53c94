"""Build hook for the optional MPFR kernel extension.

The package works without it: ``fh_gauss.kernels`` falls back to the
pure-mpmath implementations when ``fh_gauss._ckernels`` cannot be imported.
Set ``FH_GAUSS_NO_EXT=1`` to skip compiling it.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or header missing
            print(f"warning: skipping fh_gauss._ckernels ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping {ext.name} ({exc})", file=sys.stderr)


def extensions():
    if os.environ.get("FH_GAUSS_NO_EXT"):
        return []
    try:
        import gmpy2
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    gmpy2_dir = os.path.dirname(gmpy2.__file__)
    ext = Extension(
        "fh_gauss._ckernels",
        ["src/fh_gauss/_ckernels.pyx"],
        include_dirs=[gmpy2_dir],
        libraries=["mpfr", "gmp"],
        extra_compile_args=["-O2"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"}, quiet=True)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
