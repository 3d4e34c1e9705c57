"""Integral-transform toolkit for Heun's equation.

Parameter maps and numeric Pochhammer-contour Euler transforms, Frobenius
local analysis with apparency conditions, quasi-solvable spectra, numerical
monodromy, the Weierstrass elliptic kernel, and the finite-gap spectral-curve
machinery, with verification workflows for the underlying identities.
"""

__version__ = "0.1.0"
