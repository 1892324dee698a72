"""Build script: compiles the optional _speedups extension.

Set NOVASCOUT_NO_EXT=1 to skip compilation; the package then runs on the
pure-Python kernel fallback.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("NOVASCOUT_NO_EXT") != "1":
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "novascout._speedups",
                ["src/novascout/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off keeps double arithmetic identical to the
                # pure-Python fallback (no FMA contraction), so both backends
                # produce bit-identical label maps.
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
