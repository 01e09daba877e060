"""Exact equivariant Chow ring computations for the hyperelliptic invariants key lemma."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .poly import GF, ZZ, CoefficientDomain, Polynomial, VariableTable  # noqa: F401
from .parser import parse_expr  # noqa: F401
from .ring import (Relation, Ring, RingElement, RingMap, RingPresentation, base_change_mod_p,  # noqa: F401
                   coefficient_of, make_ring, make_ring_map, normal_form, parse_ring_dsl, ring_to_dsl)
