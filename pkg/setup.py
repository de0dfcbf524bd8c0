import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

# The compiled kernels are optional: if the build fails the package still
# installs and falls back to the pure-Python kernels at import time.
extensions = [
    Extension(
        "moonframe._kernels._fast",
        ["src/moonframe/_kernels/_fast.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
