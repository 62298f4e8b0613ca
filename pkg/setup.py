"""Build script for the optional compiled kernel extension.

The package runs fine without the extension (a pure-Python kernel module with
identical semantics is selected at import time), so a failed extension build
degrades to the slow path instead of breaking installation.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("mixedmotive._ckernels", ["src/mixedmotive/_ckernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
