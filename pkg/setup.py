import io
from setuptools import find_packages, setup

# This reads the __version__ variable from steinerpack/_version.py
__version__ = ""
exec(open("steinerpack/_version.py").read())

name = "steinerpack"

description = "Exact solvers for generalized Steiner tree packing and edge-disjoint paths on small structured graphs."

# README file as long_description.
long_description = io.open("README.md", encoding="utf-8").read()


# Read in requirements
requirements = open("requirements.txt").readlines()
requirements = [r.strip() for r in requirements]

steinerpack_packages = ["steinerpack"] + [
    "steinerpack." + package for package in find_packages(where="steinerpack")
]

# Sanity check
assert __version__, "Version string cannot be empty"

setup(
    name=name,
    version=__version__,
    python_requires=(">=3.8.0"),
    install_requires=requirements,
    extras_require={"dev": ["pytest>=6.2"]},
    license="N/A",
    description=description,
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=steinerpack_packages,
    package_data={"steinerpack": ["py.typed"]},
    entry_points={"console_scripts": ["steinerpack=steinerpack.cli:main"]},
)
