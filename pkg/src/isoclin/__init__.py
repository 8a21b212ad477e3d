"""Finite groups as Cayley tables: central series, restricted automorphism
groups, Hom-groups of abelian groups and n-isoclinism."""

from .group import FiniteGroup, Homomorphism, Automorphism, Subgroup
from .catalog import get_group, resolve_group, catalog_names

__version__ = "0.1.0"

__all__ = [
    "Automorphism",
    "FiniteGroup",
    "Homomorphism",
    "Subgroup",
    "catalog_names",
    "get_group",
    "resolve_group",
]
