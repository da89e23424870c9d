from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "bhatbayes._kernels._speedups",
        ["src/bhatbayes/_kernels/_speedups.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        language_level="3",
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
)
