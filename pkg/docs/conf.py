#
# nmlab documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os.path as op
import sys

# include parent directory
pdir = op.dirname(op.dirname(op.abspath(__file__)))
sys.path.insert(0, pdir)

import nmlab  # noqa: E402

# Order class attributes and functions in separate blocks
autodoc_member_order = 'groupwise'
autoclass_content = 'both'

# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.autosummary',
              'sphinx.ext.intersphinx',
              'sphinx.ext.mathjax',
              'sphinx.ext.viewcode',
              'sphinx.ext.napoleon',
              ]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

# General information about the project.
project = 'nmlab'
copyright = '2026, nmlab developers'
author = 'nmlab developers'

# This gets 'version'
release = nmlab.__version__
language = None

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'nmlabdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}
latex_documents = [
    (master_doc, 'nmlab.tex', 'nmlab Documentation',
     author, 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'nmlab', 'nmlab Documentation',
     [author], 1)
]

intersphinx_mapping = {
    "python": ('https://docs.python.org/', None),
    "numpy": ('https://numpy.org/doc/stable/', None),
    "scipy": ('https://docs.scipy.org/doc/scipy/reference/', None),
    "h5py": ('https://docs.h5py.org/en/stable/', None),
    }
