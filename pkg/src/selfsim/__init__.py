"""Decide self-similarity of finite p-groups by searching for simple virtual endomorphisms."""

from .constructions import builtin, catalog, load, parse_group_file
from .endo import DecisionReport, decide_self_similar, phi_core, virtual_endomorphism
from .group import Group, Subgroup, from_permutation_generators
from .tree import WreathRecursion, wreath_recursion

__version__ = "0.1.0"
ENGINE_VERSION = f"selfsim-{__version__}"

__all__ = [
    "DecisionReport",
    "ENGINE_VERSION",
    "Group",
    "Subgroup",
    "WreathRecursion",
    "builtin",
    "catalog",
    "decide_self_similar",
    "from_permutation_generators",
    "load",
    "parse_group_file",
    "phi_core",
    "virtual_endomorphism",
    "wreath_recursion",
]
