"""Builds the optional compiled walk kernel.

The package works without it: rfidsim.singulation falls back to the pure
Python kernel when the extension (or Cython at build time) is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("rfidsim._walk_cy", ["src/rfidsim/_walk_cy.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
