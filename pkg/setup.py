import os

from setuptools import setup

ext_modules = []
if os.environ.get("KOLMOGOROV_WEYL_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "kolmogorov_weyl._elim",
                    ["src/kolmogorov_weyl/_elim.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
