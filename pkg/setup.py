from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "antomap._kernels._cykernels",
        ["src/antomap/_kernels/_cykernels.pyx"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
