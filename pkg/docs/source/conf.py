# -*- coding: utf-8 -*-

"""Sphinx configuration for the rotorsim documentation."""

import os
import sys
from datetime import date

sys.path.insert(0, os.path.abspath("../../src"))

from rotorsim.version import VERSION  # noqa: E402

# -- Project information -----------------------------------------------------

project = "rotorsim"
copyright = f"{date.today().year}, rotorsim developers"
author = "rotorsim developers"

# The full version, including alpha/beta/rc tags, and the short X.Y.Z version.
release = VERSION
version = VERSION.split("-")[0]

if "-" in release:
    tags.add("prerelease")  # noqa: F821

# -- General configuration ---------------------------------------------------

add_module_names = False
modindex_common_prefix = ["rotorsim."]

extensions = [
    "sphinx.ext.autosummary",
    "sphinx.ext.autodoc",
    "sphinx.ext.coverage",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx_autodoc_typehints",
    "sphinx_automodapi.automodapi",
    "sphinx_automodapi.smart_resolver",
]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
    "matplotlib": ("https://matplotlib.org/stable/", None),
}

autosummary_generate = True
autoclass_content = "both"
autodoc_member_order = "bysource"

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"
language = "en"
exclude_patterns = []
pygments_style = "sphinx"

# -- Options for HTML output -------------------------------------------------

html_theme = "furo"
htmlhelp_basename = "rotorsimdoc"

# -- Options for manual page output ------------------------------------------

man_pages = [(master_doc, "rotorsim", "rotorsim Documentation", [author], 1)]
