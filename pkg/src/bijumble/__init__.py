"""Toolkit for sparse regularity and bijumbledness of graph pairs.

Submodules
----------
graphs       bit-row graphs, vertex sets, pair views, densities
patterns     counting-lemma exponents and vertex-order optimisation
jumbled      bijumbledness certificates (exact / spectral / search)
regularity   (eps,p)- and (eps,d,p)-regularity verdicts, slicing, extension
quads        C4 and codegree censuses, pair classification, defect CS check
embeddings   exact partite embedding counts and counting-window audits
experiments  seeded tripartite generators and inheritance experiments
reports      audit records, run configuration, JSON/CSV persistence
cli          command-line surface
"""

__version__ = "0.1.0"
