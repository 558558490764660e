#!/usr/bin/env python3
import os
import site
import sys

import setuptools
from setuptools import setup

# Editable install in user site directory can be allowed with this hack:
# https://github.com/pypa/pip/issues/7953.
site.ENABLE_USER_SITE = "--user" in sys.argv[1:]

with open("README.md") as f:
    long_description = f.read()

with open(os.path.join("chebyrank", "version.txt")) as f:
    version = f.read().strip()

setup(
    name="chebyrank",
    version=version,
    description="Chebyshev polynomial PageRank for undirected graphs, with Power-method baselines",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "recipes"]),
    package_data={"chebyrank": ["version.txt", "log-config.yaml"]},
    install_requires=[
        "torch>=1.8",
        "speechbrain>=0.5.11",
        "hyperpyyaml",
        "numpy",
        "scipy>=1.6",
        "networkx>=2.5",
        "tqdm",
    ],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["chebyrank=chebyrank.cli:main"]},
    python_requires=">=3.7",
)
