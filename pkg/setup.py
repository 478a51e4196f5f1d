"""Build script; compiles the optional decoding kernels when Cython is available.

The package is fully functional without the extension: hodt.kernels falls
back to the pure-Python implementations at import time.  Build with
``pip install -e . --no-build-isolation`` so the ambient Cython/numpy are
used; with isolation enabled the extension is skipped gracefully.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                'hodt._ckern',
                sources=['src/hodt/_ckern.pyx'],
                include_dirs=[numpy.get_include()],
                define_macros=[('NPY_NO_DEPRECATED_API', 'NPY_1_7_API_VERSION')],
            )
        ],
        language_level='3',
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
