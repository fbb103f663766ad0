"""Builds the optional compiled labeling kernel.

The package works without it: phonecam.kernels falls back to the
numpy/scipy backend when the extension is missing.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    numpy = None
    cythonize = None

ext_modules = []
if cythonize is not None and numpy is not None:
    ext = Extension(
        "phonecam.kernels._labeling",
        ["src/phonecam/kernels/_labeling.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext_modules = cythonize([ext], language_level=3)
    for e in ext_modules:
        e.optional = True  # a failed compile must not fail the install

setup(ext_modules=ext_modules)
