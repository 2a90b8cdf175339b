"""Builds the optional compiled BDD core; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("CSPGUARD_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "cspguard.setlogic._bdd_core",
                    ["src/cspguard/setlogic/_bdd_core.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
