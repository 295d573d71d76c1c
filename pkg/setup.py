import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SIMPLEXCERT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # fall back to the pure-Python kernels
        pass
    else:
        ext_modules = cythonize(
            [Extension("simplexcert._kernels", [os.path.join("src", "simplexcert", "_kernels.pyx")],
                       extra_compile_args=["-O3"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
