from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernels are an optional speedup: the package falls back to
# src/ammix/_kernels/pure.py when the extension is absent.
ext_modules = []
if cythonize is not None:
    ext = Extension(
        "ammix._kernels._fast",
        ["src/ammix/_kernels/_fast.pyx"],
        optional=True,
    )
    ext_modules = cythonize(
        [ext], compiler_directives={"language_level": 3, "cdivision": False}
    )

setup(ext_modules=ext_modules)
