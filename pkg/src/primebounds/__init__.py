"""Rigorous desk-scale toolkit for explicit prime-counting estimates.

Computes Chebyshev theta/psi and Mertens-type prime sums with certified
enclosures, evaluates a registry of explicit bounds on pi(x), theta(x),
prime gaps and prime sums/products, verifies them over ranges at consecutive
primes, reproduces their validity thresholds, and certifies the polynomial
positivity and monotonicity facts the bounds rest on.
"""

__version__ = "0.1.0"

from .enclosure import Enclosure  # noqa: F401
