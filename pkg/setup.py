"""Build hook for the optional compiled kernel backend.

The package is pure Python unless Cython and a C compiler are available,
in which case zenolink._kernels is built from _kernels.pyx. The flags
below deliberately avoid -ffast-math and -march=native: both backends
must produce identical IEEE-754 doubles, so contraction and reassociation
stay off.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext = Extension(
        "zenolink._kernels",
        ["src/zenolink/_kernels.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        optional=True,
    )
    ext_modules = cythonize([ext], language_level="3")
except ImportError:
    pass

setup(ext_modules=ext_modules)
