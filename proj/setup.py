from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

core_sources = [
    "src/rational.cpp",
    "src/parallel.cpp",
    "src/group.cpp",
    "src/fft.cpp",
    "src/fourier.cpp",
    "src/phase.cpp",
    "src/diophantine.cpp",
    "src/dissociation.cpp",
    "src/structure.cpp",
    "src/limitcheck.cpp",
    "src/corpus.cpp",
]

ext = Pybind11Extension(
    "bhlab._core",
    ["bindings/module.cpp"] + core_sources,
    include_dirs=["include", "vendor"],
    libraries=["gmpxx", "gmp"],
    cxx_std=20,
    extra_compile_args=["-pthread"],
    extra_link_args=["-pthread"],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
