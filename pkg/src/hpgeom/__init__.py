"""Exact finite-geometry toolkit: linear sets on PG(1, q^t), the ABB
representation, the design of GF(q^t)*/GF(q)* and higgledy-piggledy
plane sets of PG(5, q)."""

from .gfield import FiniteField, Tower, make_field, make_tower
from .projspace import Subspace, enumerate_subspaces, gaussian_binomial, theta
from .fieldred import Spread, make_spread

__version__ = "0.1.0"

__all__ = ["FiniteField", "Tower", "make_field", "make_tower", "Subspace", "enumerate_subspaces",
           "gaussian_binomial", "theta", "Spread", "make_spread", "__version__"]
