# invex-topo documentation build configuration file.
import os
import sys

sys.path.insert(0, os.path.abspath('..'))

from src import __version__  # noqa: E402

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.napoleon']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'invex-topo'
version = '.'.join(__version__.split('.')[:2])
release = __version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'alabaster'
htmlhelp_basename = 'invex-topodoc'

latex_documents = [
    ('index', 'invex-topo.tex', u'invex-topo Documentation', u'', 'manual'),
]
man_pages = [
    ('index', 'invex-topo', u'invex-topo Documentation', [], 1),
]
