import os

from setuptools import Extension, setup

# The compiled kernels are an optimization, not a requirement: if Cython or a
# C compiler is unavailable the package installs pure-Python and selects the
# numpy fallback at import time.  KOROBOX_PURE=1 skips the build explicitly.
ext_modules = []
if os.environ.get("KOROBOX_PURE") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "korobox.kernels._ckernels",
                    ["src/korobox/kernels/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception:
        ext_modules = []

setup(ext_modules=ext_modules)
