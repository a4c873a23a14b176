"""cohomolab: exact-arithmetic homological algebra workbench.

Subpackages cover exact rational linear algebra, Lie/associative structure
constructors, Chevalley-Eilenberg and Hochschild cohomology, spectral
sequences of filtered and double complexes, Weyl DG-algebras, gl_n invariant
theory, deformation checks (Gerstenhaber, Maurer-Cartan, Moyal), and
truncated q-series / characteristic-class machinery, plus a batch CLI.
"""

__version__ = "0.1.0"
