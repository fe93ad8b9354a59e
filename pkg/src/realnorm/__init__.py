"""Combinatorial models for real-normalized differentials.

Arc diagrams and their interlacement graphs, exact scalars over formally
independent symbols, cut diagrams, the rewriting system that brings a flat
diagram to caravan form, and the genus-one stratification.
"""

from .arcs import (
    Matching,
    component_count,
    count_nondegenerate,
    enumerate_matchings,
    euler_genus_oracle,
    f2_rank,
    genus,
    interlacement_graph,
    is_nondegenerate,
    reglue_oracle,
)
from .cuts import CutDiagram, CutPoint, build_surface, validate
from .moves import (
    MetricArcDiagram,
    MoveTrace,
    caravan_normalize,
    intersection_form,
    is_caravan,
    is_symplectic,
    leaf_obstruction,
    second_vassiliev_move,
    translate_pair,
)
from .scalars import PeriodLattice, RealValue, ScalarField, compare, same_lattice
from .strata import StratumLabel, classify

__all__ = [
    "CutDiagram",
    "CutPoint",
    "Matching",
    "MetricArcDiagram",
    "MoveTrace",
    "PeriodLattice",
    "RealValue",
    "ScalarField",
    "StratumLabel",
    "build_surface",
    "caravan_normalize",
    "classify",
    "compare",
    "component_count",
    "count_nondegenerate",
    "enumerate_matchings",
    "euler_genus_oracle",
    "f2_rank",
    "genus",
    "interlacement_graph",
    "intersection_form",
    "is_caravan",
    "is_nondegenerate",
    "is_symplectic",
    "leaf_obstruction",
    "reglue_oracle",
    "same_lattice",
    "second_vassiliev_move",
    "translate_pair",
    "validate",
]
