"""Build the optional Cython kernels; the package works without them."""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("CAMIR_EVAL_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "camir_eval._kernels._ckernels",
        ["src/camir_eval/_kernels/_ckernels.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())
