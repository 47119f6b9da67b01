"""Exact symmetric-function and local-field matrix toolkit.

Layers (bottom up):

* ``scalars`` -- Gaussian rationals, Laurent polynomials in q, formal
  fractions.
* ``torus`` / ``weyl`` -- multivariate Laurent polynomials carrying a
  hyperoctahedral group action, exact binomial division.
* ``hall_littlewood`` -- orbit sums with parameter, their normalizations,
  and Poincare-type counting series.
* ``spherical`` -- the explicit-value machinery on the parameter torus:
  phased evaluation, functional equations, rank-one closed forms.
* ``plancherel`` -- quadrature on the compact torus, inner products,
  transform and inversion checks.
* ``padic`` -- finite-precision local-field matrices: membership tests,
  orbit invariants, Haar sampling, diagonalization, Monte Carlo
  integration of the defining kernel.
* ``cli`` -- the ``hermlab`` command-line entry point.
"""

__version__ = "0.1.0"
