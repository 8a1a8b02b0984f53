"""Rainbow tight Hamilton cycles in hypergraph systems: structures, checks and exact search."""

from .core import GraphSystem, KGraph, OneKGraph, load_system, system_to_onek
from .sequential import SeqWalk, validate
from .solver import SearchConfig, find_rainbow_hamilton, verify_hamilton

__all__ = ["GraphSystem", "KGraph", "OneKGraph", "SeqWalk", "SearchConfig", "find_rainbow_hamilton",
           "load_system", "system_to_onek", "validate", "verify_hamilton"]
__version__ = "0.1.0"
