"""Level ancestor, weighted LA, bottleneck and LCA queries on a dynamic tree in faulty memory."""

from .black_forest import BlackForest, ForestError
from .config import TreeConfig
from .faulty_ram import (Adversary, RandomStrategy, SafeStore, SafeStoreOverflow,
                         ScriptedStrategy, SimulationError, UnreliableMemory)
from .oracle import AuditedForest, MirrorForest, OracleTree
from .outcomes import ERROR, INCONCLUSIVE, ROOT_REACHED, Outcome, is_vertex
from .tree import ResilientTree

__all__ = [
    "Adversary", "AuditedForest", "BlackForest", "ERROR", "ForestError", "INCONCLUSIVE",
    "MirrorForest", "OracleTree", "Outcome", "ROOT_REACHED", "RandomStrategy", "ResilientTree",
    "SafeStore", "SafeStoreOverflow", "ScriptedStrategy", "SimulationError", "TreeConfig",
    "UnreliableMemory", "is_vertex",
]
