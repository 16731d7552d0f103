import os

from setuptools import setup

ext_modules = []
if os.environ.get("LEVSELECT_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "levselect._ckernels",
                    ["src/levselect/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # Cython/numpy missing at build time: ship the pure-Python fallback only
        ext_modules = []

setup(ext_modules=ext_modules)
