# Sphinx configuration for the witbench documentation
import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "../src")))

import witbench  # noqa: E402

project = "witbench"
copyright = "2021, witbench developers"
author = "witbench developers"
version = witbench.__version__
release = version

extensions = [
    "autoapi.sphinx",
    "sphinx.ext.autodoc",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx_autodoc_typehints",
    "sphinxarg.ext",
]

autoapi_modules = {"witbench": None}

autodoc_default_options = {"members": None}

# Sphinx runs nitpicky, types from outside witbench cannot be resolved
nitpick_ignore = [
    ("py:class", "str"),
    ("py:class", "int"),
    ("py:class", "float"),
    ("py:class", "bool"),
    ("py:class", "tuple"),
    ("py:class", "np.ndarray"),
    ("py:class", "numpy.ndarray"),
    ("py:class", "np.random.Generator"),
    ("py:class", "argparse.ArgumentParser"),
]

source_suffix = ".rst"
master_doc = "index"
exclude_patterns = ["_build"]

html_theme = "sphinx_rtd_theme"
