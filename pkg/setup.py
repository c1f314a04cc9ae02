"""Build the optional Cython kernels; the package falls back to pure Python without them."""
import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("QUDITENT_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "quditent._ckernels",
                ["src/quditent/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
