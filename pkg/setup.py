import os

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:  # numpy fallback only
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "holoqc._kernels",
                ["src/holoqc/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("CYTHON_CCOMPLEX", "1"), ("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3", "-fcx-limited-range"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

if os.environ.get("HOLOQC_NO_EXT"):
    ext_modules = []

setup(ext_modules=ext_modules)
