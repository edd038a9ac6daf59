# Configuration file for the Sphinx documentation builder.
#
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('../'))

# -- Project information -----------------------------------------------------

project = 'adapt-rdm'
copyright = '2020, The adapt-rdm Authors'
author = 'The adapt-rdm Authors'

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.autosummary',
]

templates_path = ['_templates']
master_doc = 'index'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

napoleon_use_rtype = False

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
default_role = 'py:obj'
autodoc_default_flags = ['members']
autosummary_generate = True
