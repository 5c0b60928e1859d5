"""Build script for the optional compiled kernels.

The extension is optional: when Cython or a C compiler is unavailable the
package installs without it and falls back to the pure-Python kernels.
"""
import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("RB3_NO_EXTENSION"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "rb3lie._ckernels",
        ["src/rb3lie/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
