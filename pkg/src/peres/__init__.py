"""Peres-style recursive randomness extractors built from binarization trees."""
from .core import (
    CapExceeded,
    Distribution,
    SymbolString,
    class_probability,
    class_size,
    composition_of,
    enumerate_class,
    is_extracting_multiset,
)
from .extractors import (
    Scheme,
    UnknownScheme,
    builtin,
    builtin_names,
    dijkstra_base,
    double_unrolled_peres2,
    elias,
    extract,
    extract_truncated,
    von_neumann,
)
from .tree import BinarizationTree, ComponentTable, parse_tree

__version__ = "0.1.0"
