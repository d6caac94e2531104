"""Build script: compiles the interpreter hot kernel as a C extension.

The package works without the extension (a pure-Python twin is selected at
import time), so a failed compile is not fatal for development checkouts;
`pip install` builds it normally.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "kolmlab._interp_cy",
                sources=["src/kolmlab/_interp_cy.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
