import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# The kernels promise bit-identical results against the pure-Python
# backend, which constrains codegen two ways:
#   -ffp-contract=off      no fused multiply-add inside expressions
#   -fno-builtin-sin/-cos  GCC otherwise merges adjacent sin(x)/cos(x)
#                          pairs into one sincos() call, and glibc's
#                          sincos can differ from sin by 1 ulp
extensions = [
    Extension(
        "geohub._ckernels",
        sources=["src/geohub/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=[
            "-O3",
            "-fopenmp",
            "-ffp-contract=off",
            "-fno-builtin-sin",
            "-fno-builtin-cos",
            "-fno-builtin-sincos",
        ],
        extra_link_args=["-fopenmp"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
)
