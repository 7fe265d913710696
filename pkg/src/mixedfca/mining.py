"""Mixed implication and mixed concept mining, lattice construction.

Candidates are visited in lectic order: the attribute subset ``Y`` runs as a
binary counter with the last attribute as least significant bit, from ``∅``
through ``M`` inclusive; for each ``Y`` every sign assignment is tried,
again as a counter over ``Y``'s members with all-positive first.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import _kernels
from .context import FormalContext, MixedSet, _bits
from .errors import CapacityError, InputError
from .implications import ImplicationSystem, MixedImplication

MAX_MINING_ATTRIBUTES = 20
MAX_BRUTE_FORCE_ATTRIBUTES = 12


def next_lectic(y: int, n_attributes: int) -> int | None:
    """Successor of ``y`` as a counter whose least significant bit is the last
    attribute; ``None`` after ``y == M``."""
    for i in range(n_attributes - 1, -1, -1):
        bit = 1 << i
        if not y & bit:
            # set i, clear every attribute after it
            return (y | bit) & ~((1 << n_attributes) - (1 << (i + 1)))
    return None


def sign_assignments(y: int) -> Iterator[MixedSet]:
    """The 2^|Y| consistent sets with support ``y``, all-positive first."""
    members = list(_bits(y))
    k = len(members)
    for x in range(1 << k):
        xm = 0
        for j in range(k):
            if x >> (k - 1 - j) & 1:
                xm |= 1 << members[j]
        yield MixedSet(y & ~xm, xm)


def closure_budget(n_attributes: int, n_objects: int) -> int:
    """Worst-case number of closure evaluations: 3^|M| - 2^|M| + |G|."""
    return 3**n_attributes - 2**n_attributes + n_objects


@dataclass
class MiningResult:
    sigma: ImplicationSystem
    intents: list[MixedSet]
    closure_evaluations: int


def _check_size(ctx: FormalContext) -> None:
    if ctx.n_attributes > MAX_MINING_ATTRIBUTES:
        raise CapacityError(
            f"mining enumerates 3^|M| candidates; |M|={ctx.n_attributes} exceeds "
            f"{MAX_MINING_ATTRIBUTES}"
        )


def _run(ctx: FormalContext, collect_intents: bool, backend=None):
    _check_size(ctx)
    sig, intents, evals = _kernels.mine(
        ctx.rows_array(), ctx.n_attributes, collect_intents, backend=backend
    )
    sigma = ImplicationSystem(
        MixedImplication(MixedSet(int(bp), int(bn)), MixedSet(int(cp), int(cn)))
        for bp, bn, cp, cn in sig.tolist()
    )
    return sigma, [MixedSet(int(p), int(n)) for p, n in intents.tolist()], int(evals)


def mine_implications(ctx: FormalContext, backend=None) -> ImplicationSystem:
    """Every closed candidate ``A`` with ``A ≠ A''`` contributes ``A -> A'' \\ A``."""
    return _run(ctx, False, backend)[0]


def mine_implications_and_concepts(ctx: FormalContext, backend=None) -> MiningResult:
    """Implications plus all mixed concept intents.

    Candidates that are their own closure are collected as intents; the object
    intents are appended afterwards, followed by the contradictory intent
    M ∪ M̄ of the empty extent. Duplicates are dropped, first occurrence kept.
    """
    sigma, loop_intents, evals = _run(ctx, True, backend)
    intents = dict.fromkeys(loop_intents)
    for row in ctx.row_masks:
        intents.setdefault(MixedSet.from_row(row, ctx.n_attributes))
    intents.setdefault(MixedSet.full(ctx.n_attributes))
    return MiningResult(sigma, list(intents), evals)


@dataclass(frozen=True)
class MixedConcept:
    extent: int
    intent: MixedSet

    def extent_names(self, ctx: FormalContext) -> list[str]:
        return [ctx.objects[i] for i in _bits(self.extent)]


def concept_order_key(extent: int) -> tuple:
    """Top-down linear extension: larger extents first, then lexicographic on indices."""
    return (-extent.bit_count(), tuple(_bits(extent)))


@dataclass
class ConceptLattice:
    """Concepts sorted top-down; ``covers`` holds (lower, upper) index pairs."""

    context: FormalContext
    concepts: list[MixedConcept]
    covers: list[tuple[int, int]] = field(default_factory=list)

    @property
    def top(self) -> MixedConcept:
        return self.concepts[0]

    def __len__(self):
        return len(self.concepts)

    def leq(self, i: int, j: int) -> bool:
        a, b = self.concepts[i].extent, self.concepts[j].extent
        return a & ~b == 0

    def upper_covers(self, i: int) -> list[int]:
        return [hi for lo, hi in self.covers if lo == i]

    def lower_covers(self, i: int) -> list[int]:
        return [lo for lo, hi in self.covers if hi == i]

    def to_dict(self) -> dict:
        ctx = self.context
        return {
            "attributes": list(ctx.attributes),
            "objects": list(ctx.objects),
            "nodes": [
                {
                    "id": i,
                    "extent": c.extent_names(ctx),
                    "intent": [
                        ctx.attributes[a] if p else "~" + ctx.attributes[a]
                        for a, p in c.intent.literals()
                    ],
                }
                for i, c in enumerate(self.concepts)
            ],
            "edges": [list(e) for e in self.covers],
            "top": 0,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _cover_pairs(extents: Sequence[int]) -> list[tuple[int, int]]:
    n = len(extents)
    below = [
        [j for j in range(n) if j != i and extents[j] & ~extents[i] == 0 and extents[j] != extents[i]]
        for i in range(n)
    ]
    covers = []
    for hi in range(n):
        strict = set(below[hi])
        for lo in below[hi]:
            # lo is covered by hi unless some mid sits strictly between them
            if not any(lo in below[mid] for mid in strict if mid != lo):
                covers.append((lo, hi))
    covers.sort()
    return covers


def build_lattice(ctx: FormalContext, intents: Iterable[MixedSet]) -> ConceptLattice:
    """Pair each closed intent with its extent, deduplicate by extent, order and
    compute the covering relation."""
    by_extent: dict[int, MixedSet] = {}
    for intent in intents:
        if ctx.mixed_closure(intent) != intent:
            raise InputError(f"intent {{{ctx.format(intent)}}} is not closed")
        by_extent.setdefault(ctx.mixed_down_mask(intent), intent)
    ordered = sorted(by_extent, key=concept_order_key)
    concepts = [MixedConcept(e, by_extent[e]) for e in ordered]
    return ConceptLattice(ctx, concepts, _cover_pairs(ordered))


def mine_lattice(ctx: FormalContext, backend=None) -> ConceptLattice:
    return build_lattice(ctx, mine_implications_and_concepts(ctx, backend).intents)


def brute_force_concepts(ctx: FormalContext) -> list[MixedConcept]:
    """All mixed concepts by exhaustive search over the 3^|M| consistent sets.

    Uses only the context's reference operators, not the mining kernels.
    """
    n = ctx.n_attributes
    if n > MAX_BRUTE_FORCE_ATTRIBUTES:
        raise CapacityError(
            f"brute force enumerates 3^|M| sets; |M|={n} exceeds {MAX_BRUTE_FORCE_ATTRIBUTES}"
        )
    found: dict[int, MixedSet] = {}
    for signs in itertools.product((0, 1, 2), repeat=n):
        pos = sum(1 << i for i, s in enumerate(signs) if s == 1)
        neg = sum(1 << i for i, s in enumerate(signs) if s == 2)
        a = MixedSet(pos, neg)
        if ctx.mixed_closure(a) == a:
            found.setdefault(ctx.mixed_down_mask(a), a)
    # the empty extent always yields a concept, whose intent is inconsistent
    bottom = MixedSet.full(n)
    found.setdefault(ctx.mixed_down_mask(bottom), ctx.mixed_closure(bottom))
    return [MixedConcept(e, found[e]) for e in sorted(found, key=concept_order_key)]
