"""Build the optional Cython kernels.

The package works without them (see ``sp_soliton.kernels``); a failed
compile only drops back to the pure-Python implementations.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SP_SOLITON_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "sp_soliton._ckernels",
                    ["src/sp_soliton/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"sp_soliton: skipping compiled kernels ({exc})")
        ext_modules = []

setup(ext_modules=ext_modules)
