from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# -ffp-contract=off keeps the compiled sampler bit-identical to the NumPy
# fallback (no FMA contraction of the bilinear blend).
extensions = [
    Extension(
        "autocam360._resample",
        ["src/autocam360/_resample.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        optional=True,
    )
]

setup(
    ext_modules=(
        cythonize(extensions, compiler_directives={"language_level": "3"})
        if cythonize is not None
        else []
    ),
)
