"""Twisted conjugacy classes and Reidemeister numbers in finite quotients of
SL(n, Z), GL(n, Z) and Sp(2n, Z)."""

from .errors import (InvalidAutomorphism, NonDescending, NotASubgroup, NotInvariant, NotInvertible, NotNormal,
                     ResourceLimit, UsageError)
from .matrices import IntMatrix, ModMatrix, reduce_mod
from .groups import FiniteMatrixGroup, GroupFamily, build_quotient, direct_product
from .automorphisms import Inner, CharacterTwist, compose, identity, sigma, tau, theta
from .orbits import TwistedPartition, twisted_partition

__all__ = [
    "InvalidAutomorphism", "NonDescending", "NotASubgroup", "NotInvariant", "NotInvertible", "NotNormal",
    "ResourceLimit", "UsageError", "IntMatrix", "ModMatrix", "reduce_mod", "FiniteMatrixGroup", "GroupFamily",
    "build_quotient", "direct_product", "Inner", "CharacterTwist", "compose", "identity", "sigma", "tau",
    "theta", "TwistedPartition", "twisted_partition",
]

__version__ = "0.1.0"
