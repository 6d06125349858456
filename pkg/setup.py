"""Build the optional compiled Jacobi kernel.

If Cython or a C compiler is unavailable the package installs without the
extension and falls back to the pure-Python kernel at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [
            Extension(
                "cstar_ineq._jacobi_ext",
                ["src/cstar_ineq/_jacobi_ext.pyx"],
                # no FMA contraction: keeps results bitwise equal to the Python kernel
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
