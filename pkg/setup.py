"""Build script: compiles the optional extension kernels.

The package is fully functional without the compiled extension; the pure
Python fallback in chainplan._kernels_py is selected at import time when the
extension is missing.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("chainplan._kernels", ["src/chainplan/_kernels.pyx"])],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
