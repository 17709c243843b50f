"""Saecular persistence for chain diagrams of abelian groups, filtered complexes and finite groups."""

from .abgrp import AbHom, AbPresentation, Coefficients, JhVector, QuotientShape, jh_vector
from .diagram import ChainDiagram, DiagramError, Interval, SubDiagram, is_interval_functor
from .fingroup import FiniteGroup, GroupDiagram, GroupHom, coset_barcode, g_saecular, normalized_barcode
from .homology import Cell, FilteredComplex, homology_barcode, homology_diagram
from .reduction import BACKEND
from .saecular import (
    NaturalityFailure,
    barcode,
    cdf,
    saecular_filtrations,
    subsaecular_series,
    type_b_pd,
)
from .spectral import InfiniteLengthError, ls_enumeration_check, ls_terms

__all__ = [
    "AbHom", "AbPresentation", "BACKEND", "Cell", "ChainDiagram", "Coefficients", "DiagramError",
    "FilteredComplex", "FiniteGroup", "GroupDiagram", "GroupHom", "InfiniteLengthError", "Interval",
    "JhVector", "NaturalityFailure", "QuotientShape", "SubDiagram", "barcode", "cdf", "coset_barcode",
    "g_saecular", "homology_barcode", "homology_diagram", "is_interval_functor", "jh_vector",
    "ls_enumeration_check", "ls_terms", "normalized_barcode", "saecular_filtrations",
    "subsaecular_series", "type_b_pd",
]
