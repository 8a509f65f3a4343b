import os

from setuptools import Extension, setup

# The compiled kernels are an optional speedup: if Cython (or a C compiler)
# is unavailable the install still succeeds and the package selects the
# pure-Python backend at import time.  Set KS_SKIP_EXT=1 to force that.
ext_modules = []
if os.environ.get("KS_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "kspaces._core",
                    ["src/kspaces/_core.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
