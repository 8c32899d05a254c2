"""Exact arithmetic engine over prime fields for Ext-algebra minimal models.

Computes homotopy retracts of Hochschild cochain complexes of finite
dimensional augmented local algebras, transfers A-infinity minimal models
onto cohomology, forms dual bar constructions and classical hulls, and
verifies that the input algebra is reconstructed up to isomorphism.
"""

__version__ = "0.1.0"
