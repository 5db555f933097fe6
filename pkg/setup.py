import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "crchan._kernels._csr",
                ["src/crchan/_kernels/_csr.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    # The package runs on the numpy fallback kernels when Cython is absent.
    extensions = []

setup(ext_modules=extensions)
