"""Exact-arithmetic tools for Szabo operators of pseudo-Riemannian curvature.

Submodules:

* ``exactpoly``: rational multivariate polynomials and the quadratic form q
* ``pseudolin``: exact linear algebra over an indefinite inner product
* ``curvature``: covariant-derivative tensors and Szabo operators
* ``szaboclass``: polynomial operator maps, the classes P_n, the nullcone
* ``polydep``: minor ideals and dependence degrees over the nullcone
* ``spectral``: spectral profiles and the annihilating operator
* ``obstruction``: Stiefel-Whitney and KO arithmetic with proof traces
* ``cli``: the ``szabo`` command
"""

__version__ = "0.1.0"
