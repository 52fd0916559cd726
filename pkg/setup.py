from setuptools import Extension, setup

ext_modules = [
    Extension(
        "fedvcg._core",
        sources=["src/fedvcg/_core.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        optional=True,
    )
]

if __name__ == "__main__":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(ext_modules, language_level="3")
    except ImportError:
        # No Cython available: install pure-Python only, the package falls
        # back to fedvcg._core_py at import time.
        ext_modules = []

    setup(ext_modules=ext_modules)
