"""Build hook for the optional compiled kernel extension.

The package is fully functional without the extension: qident.kernels falls
back to the pure-Python twin at import time.  Build with

    python setup.py build_ext --inplace

or let pip try during install; any Cython/compiler failure degrades to the
pure backend instead of failing the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("qident._kernels", ["src/qident/_kernels.pyx"])],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - environment dependent
    print(f"qident: skipping compiled kernels ({exc}); pure-Python backend will be used")

setup(ext_modules=ext_modules)
