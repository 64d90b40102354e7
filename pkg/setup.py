# -*- coding: utf-8 -*-

# PSF tutorial for packaging up projects:
# https://packaging.python.org/tutorials/packaging-projects

import glob
import os
from setuptools import setup, find_packages

SCRIPTS_DIR = "diversipy/scripts/"
scripts = glob.glob(os.path.join(SCRIPTS_DIR, "*.py"))
scripts.remove(os.path.join(SCRIPTS_DIR, "__init__.py"))

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(
  classifiers = [
      "Programming Language :: Python :: 3",
      "License :: OSI Approved :: MIT License",
      "Operating System :: OS Independent",
  ],
  description = "Finite diversities, l1 embeddings and exact distortion measurement.",
  extras_require = {
    "test": ["pytest"],
    "docs": ["sphinx", "sphinx-argparse"],
  },
  install_requires = [
    "inflection",
    "networkx",
    "numpy",
    "scipy",
  ],
  long_description = long_description,
  long_description_content_type = "text/markdown",
  name = "diversipy",
  packages = find_packages(exclude=["tests"]),
  python_requires = ">=3.10",
  scripts = scripts,
  version = "0.1.0",
)
