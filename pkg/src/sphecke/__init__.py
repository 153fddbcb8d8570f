"""Exact computational toolkit for spherical Hecke algebras of split
reductive groups: the Satake transform over Laurent polynomials in a formal
square root of the residue cardinality, Satake parameters and eigensystem
twists over finite fields, automorphic-weight combinatorics, and the mod-p
theta operator on level-one q-expansions.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    DimensionError,
    DomainError,
    FieldSplitError,
    InconsistencyError,
    ParseError,
    ResourceBoundError,
    SpheckeError,
)
from .root_data import CharacterOfG, RootDatum, builtin, gl, gsp, product  # noqa: F401
