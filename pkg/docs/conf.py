#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# diversipy documentation build configuration file.

import sys
sys.path.append("../")

#http://www.sphinx-doc.org/en/stable/ext/autodoc.html#directive-autoclass
autoclass_content = "both"

#http://www.sphinx-doc.org/en/stable/ext/autodoc.html
autodoc_member_order = "bysource"

# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.todo',
    'sphinx.ext.viewcode',
    'sphinxarg.ext'
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'diversipy'
version = '0.1'
release = '0.1.0'

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = True

# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'
html_sidebars = {
    '**': [
        'relations.html',
        'searchbox.html',
    ]
}
htmlhelp_basename = 'diversipydoc'

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'diversipy', 'diversipy Documentation', [], 1)
]
