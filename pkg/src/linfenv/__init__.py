"""Exact-arithmetic universal enveloping A-infinity algebras.

Construct the enveloping A-infinity algebra of a finite-type L-infinity
algebra along three independent routes, and machine-verify the structure
identities, the enveloping comparisons and the induced quasi-isomorphisms
on configurable degree windows, all over the rationals.
"""

__version__ = "0.1.0"
