"""Build script.  The compiled integrator kernel is optional: when Cython
(or a C compiler) is unavailable the package installs anyway and falls back
to the numpy implementation at import time."""

from setuptools import setup


def ext_modules():
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "qht._kernel",
        sources=["src/qht/_kernel.pyx"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=ext_modules())
