import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("DEFINDEX_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("defindex._kernels", ["src/defindex/_kernels.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        # No Cython available: install pure-Python only, the package falls
        # back to the interpreted kernel at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
