from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the pure-Python
# twin in mapolytope._kernels.pure when the extension is unavailable.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mapolytope._kernels._ckernels",
                ["src/mapolytope/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
