"""Build script: compiles the optional fast simulation kernels.

The package works without the extension (a pure-Python kernel is selected at
import time), so a missing Cython or C compiler only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("polywalk._kernels", ["src/polywalk/_kernels.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
