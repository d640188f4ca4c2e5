"""Finite AG-groupoids: Cayley tables, regularity classes, enumeration and proof replay."""

__version__ = "0.1.0"

from .classify import ClassKind, ClassReport, classify
from .enumeration import CanonicalForm, EnumSpec, are_isomorphic, canonical_form, enumerate_backtracking, enumerate_naive
from .magma import Magma, StructureReport, parse_magma, probe, serialize_magma

__all__ = [
    "CanonicalForm",
    "ClassKind",
    "ClassReport",
    "EnumSpec",
    "Magma",
    "StructureReport",
    "are_isomorphic",
    "canonical_form",
    "classify",
    "enumerate_backtracking",
    "enumerate_naive",
    "parse_magma",
    "probe",
    "serialize_magma",
]
