"""Exact computation with CRT-modules.

A CRT-module packages three periodic graded abelian groups (the real,
complex and self-conjugate layers of united K-theory) with eight
connecting operations.  This package verifies the defining relations and
acyclicity, builds free modules and length-one resolutions, computes the
CRT tensor product and Tor, and solves the Kunneth extension problem,
reproducing the K-theory tables for real Cuntz algebras and their tensor
products over exact integer arithmetic.
"""

__version__ = "0.1.0"
