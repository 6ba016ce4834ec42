"""revling: a reversible language-processing engine.

One declarative rule set per language drives both directions: surface
string -> logical form (parsing) and logical form -> surface string
(generation).  The engine combines a unification feature grammar,
feature-augmented two-level morphology, and two-level inter-word
spelling rules (elision, contraction, hyphen effects).  French and
Spanish rule packs ship with the package.
"""

from .featstruct import (
    FSNode,
    FeatureStructureError,
    FSSyntaxError,
    equal_mod_renaming,
    read_fs,
    subsumes,
    unify,
    write_fs,
)
from .semterm import read_term, write_term
from .packs import load_french, load_spanish, load_pack

__all__ = [
    "FSNode",
    "FeatureStructureError",
    "FSSyntaxError",
    "equal_mod_renaming",
    "read_fs",
    "subsumes",
    "unify",
    "write_fs",
    "read_term",
    "write_term",
    "load_french",
    "load_spanish",
    "load_pack",
]
