"""Exact computations with crystallographic groups of dimension 2 and 3: point
groups, stabilizers, maximal finite and maximal virtually cyclic subgroups, and
symbolic Whitehead groups assembled from them."""

from .crystgroup import AffineIsometry, CrystGroup, build_group, load_group, parse_group, product_with_Z
from .errors import InputError, InvariantViolation, WhError
from .finite_groups import FiniteType, identify_type
from .geometry import Line, line_stabilizer, point_stabilizer
from .ktheory import KValue, wh_vc
from .report import corollary2, whitehead_group
from .vc_classify import VCDescriptor, classify
from .vc_enumerate import maximal_finite_classes, maximal_vc_classes

__version__ = "0.1.0"

__all__ = [
    "AffineIsometry", "CrystGroup", "build_group", "load_group", "parse_group", "product_with_Z",
    "InputError", "InvariantViolation", "WhError", "FiniteType", "identify_type", "Line",
    "line_stabilizer", "point_stabilizer", "KValue", "wh_vc", "corollary2", "whitehead_group",
    "VCDescriptor", "classify", "maximal_finite_classes", "maximal_vc_classes",
]
