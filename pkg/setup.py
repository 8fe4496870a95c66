"""Build script: compiles the optional Cython kernel core.

If no C toolchain is available the build falls back to a pure-Python
install; camsa._kernels selects the numpy/scipy implementations at import.
Run `python setup.py build_ext --inplace` to compile in a source checkout.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "camsa._kernels._core",
                sources=["src/camsa/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - toolchain-dependent
    print(f"camsa: skipping compiled kernels ({exc}); pure fallback will be used")

setup(ext_modules=ext_modules)
