from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; tempus._backend falls back
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "tempus._kernels",
                ["src/tempus/_kernels.pyx"],
                extra_compile_args=["-O2", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
