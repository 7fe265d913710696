"""Formal concept analysis with negative attributes and lattice-guided tuning."""
from ._kernels import BACKEND
from .context import FormalContext, MixedSet, load_context, read_context, save_context
from .errors import CapacityError, InputError, MixedFCAError, ParseError
from .implications import ImplicationSystem, MixedImplication, entails, holds, is_closed_wrt
from .mining import (
    ConceptLattice,
    MixedConcept,
    MiningResult,
    brute_force_concepts,
    build_lattice,
    mine_implications,
    mine_implications_and_concepts,
    mine_lattice,
)
from .tuner import ObjectiveSpec, TuningProblem, TuningReport, tune

__all__ = [
    "BACKEND",
    "CapacityError",
    "ConceptLattice",
    "FormalContext",
    "ImplicationSystem",
    "InputError",
    "MiningResult",
    "MixedConcept",
    "MixedFCAError",
    "MixedImplication",
    "MixedSet",
    "ObjectiveSpec",
    "ParseError",
    "TuningProblem",
    "TuningReport",
    "brute_force_concepts",
    "build_lattice",
    "entails",
    "holds",
    "is_closed_wrt",
    "load_context",
    "mine_implications",
    "mine_implications_and_concepts",
    "mine_lattice",
    "read_context",
    "save_context",
    "tune",
]
