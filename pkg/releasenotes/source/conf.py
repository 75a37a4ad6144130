#    Licensed under the Apache License, Version 2.0 (the "License"); you may
#    not use this file except in compliance with the License. You may obtain
#    a copy of the License at
#
#         http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
#    WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
#    License for the specific language governing permissions and limitations
#    under the License.

# -- General configuration ------------------------------------------------

extensions = [
    'reno.sphinxext',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'qlga-tools Release Notes'
copyright = u'2026, qlga-tools Developers'

# The full version, including alpha/beta/rc tags, is taken from git by reno.
release = ''
version = ''

exclude_patterns = []
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'
htmlhelp_basename = 'QlgaToolsReleaseNotesdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    ('index', 'QlgaToolsReleaseNotes.tex',
     u'qlga-tools Release Notes Documentation',
     u'qlga-tools Developers', 'manual'),
]

# -- Options for Internationalization output ------------------------------

locale_dirs = ['locale/']
