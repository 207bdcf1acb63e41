"""Build script for the optional Cython kernels.

The extension is optional: if Cython or a C compiler is missing the package
installs without it and ``tagree.kernels`` falls back to the numpy path.
Set ``TAGREE_NO_EXT=1`` to skip the build explicitly.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("TAGREE_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "tagree._ckernels",
                    ["src/tagree/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
