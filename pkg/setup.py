import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-python install; secalign._kernels falls back to the numpy backend.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "secalign._kernels._core",
                ["src/secalign/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
