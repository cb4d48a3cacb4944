"""Build script.  The compiled kernel is optional: if Cython (or a C
compiler) is unavailable the package installs anyway and falls back to
the pure-Python kernel at import time."""

import os

from setuptools import Extension, setup

ext_modules = []
try:
    if not os.path.exists("src/so4atom/_kernel_c.pyx"):
        raise ImportError
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "so4atom._kernel_c",
                sources=["src/so4atom/_kernel_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
