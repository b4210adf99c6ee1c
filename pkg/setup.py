from Cython.Build import cythonize
from setuptools import Extension, setup

# Compiled fast path for the MLP forward/backprop kernels.  The package
# falls back to the pure-numpy kernels at import time if this extension
# is missing, so a failed build only costs speed, not functionality.
extensions = [
    Extension(
        "tailsim._kernels",
        ["src/tailsim/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
