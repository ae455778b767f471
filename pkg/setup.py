"""Build script for the optional compiled kernels.

The package works without the extension (a pure-Python fallback is selected
at import time), so the extension is marked optional: a missing compiler
degrades the install instead of failing it.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "rppgkit._kernels._core",
        sources=["src/rppgkit/_kernels/_core.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

if cythonize is not None:
    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
else:
    ext_modules = []

setup(ext_modules=ext_modules)
