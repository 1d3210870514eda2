"""Build script for the optional compiled split-scan kernel.

The package is fully functional without the extension (a numpy fallback
is selected at import time), so the extension is marked optional and a
failed compile never fails the install.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "styloboost.gbdt._splitkernel",
                ["src/styloboost/gbdt/_splitkernel.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
