# Sphinx configuration for the rpsurf documentation.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys

sys.path.insert(0, os.path.abspath("../src"))

from rpsurf import __version__

# -- Project information -----------------------------------------------------

project = "rpsurf"
copyright = "2025, Heiner Lehr"
author = "Heiner Lehr"
release = __version__
version = __version__

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx_autodoc_typehints",
    "myst_parser",
]

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

# -- AutoDoc configuration ---------------------------------------------------
autodoc_default_options = {
    "members": True,
    "member-order": "bysource",
    "undoc-members": True,
    "exclude-members": "__weakref__, __dataclass_fields__, __dataclass_params__, __match_args__",
}
autodoc_typehints = "description"
always_document_param_types = True

# Docstrings use the Google layout (Args, Returns, Raises, Example)
napoleon_google_docstring = True
napoleon_numpy_docstring = False

# -- MyST configuration ------------------------------------------------------
source_suffix = {
    ".rst": None,
    ".md": "markdown",
}

# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme"
html_title = f"rpsurf {version}"

# -- Intersphinx configuration -----------------------------------------------
intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "networkx": ("https://networkx.org/documentation/stable/", None),
}
