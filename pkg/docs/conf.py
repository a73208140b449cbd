# -*- coding: utf-8 -*-
#
# django-probmet documentation build configuration file.

import os
import sys

import django

sys.path.insert(0, os.path.abspath(os.pardir))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "tests.settings")
django.setup()

import probmet  # noqa: E402

# -- General configuration -----------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx_rtd_theme",
    "sphinx.ext.autosectionlabel",
]
autodoc_member_order = "bysource"

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "django-probmet"
copyright = "django-probmet contributors"

# The short X.Y version.
version = ".".join(probmet.__version__.split(".")[:2])
# The full version, including alpha/beta/rc tags.
release = probmet.__version__

exclude_patterns = ["_build"]
pygments_style = "sphinx"

# -- Options for HTML output ---------------------------------------------------

html_theme = "sphinx_rtd_theme"
htmlhelp_basename = "django-probmetdoc"

# -- Options for manual page output --------------------------------------------

man_pages = [
    ("cli", "probmet", "django-probmet command line", ["django-probmet contributors"], 1)
]
