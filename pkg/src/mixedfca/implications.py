"""Mixed attribute implications: validity, the closedness filter, entailment."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .context import FormalContext, MixedSet, format_mixed, parse_mixed
from .errors import CapacityError, InputError, ParseError

ARROW = "->"
MAX_ENTAILMENT_ATTRIBUTES = 20


@dataclass(frozen=True)
class MixedImplication:
    premise: MixedSet
    conclusion: MixedSet

    def format(self, attributes: Sequence[str]) -> str:
        lhs = format_mixed(attributes, self.premise)
        rhs = format_mixed(attributes, self.conclusion)
        return f"{lhs} {ARROW} {rhs}".strip()


class ImplicationSystem:
    """Ordered collection of implications (Σ). Iterates in insertion order."""

    def __init__(self, implications: Iterable[MixedImplication] = ()):
        self._items = list(implications)

    def append(self, imp: MixedImplication) -> None:
        self._items.append(imp)

    def __iter__(self) -> Iterator[MixedImplication]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, i):
        return self._items[i]

    def __eq__(self, other):
        if not isinstance(other, ImplicationSystem):
            return NotImplemented
        return self._items == other._items

    def __repr__(self):
        return f"ImplicationSystem({len(self._items)} implications)"

    def to_text(self, attributes: Sequence[str]) -> str:
        return "".join(imp.format(attributes) + "\n" for imp in self._items)

    def to_json(self, attributes: Sequence[str]) -> str:
        payload = [
            {
                "premise": [_token(attributes, i, p) for i, p in imp.premise.literals()],
                "conclusion": [_token(attributes, i, p) for i, p in imp.conclusion.literals()],
            }
            for imp in self._items
        ]
        return json.dumps(payload, indent=2) + "\n"


def _token(attributes, i, positive):
    return attributes[i] if positive else "~" + attributes[i]


def parse_implication(attributes: Sequence[str], line: str) -> MixedImplication:
    if line.count(ARROW) != 1:
        raise InputError(f"expected exactly one {ARROW!r} in {line!r}")
    lhs, rhs = line.split(ARROW)
    return MixedImplication(parse_mixed(attributes, lhs), parse_mixed(attributes, rhs))


def load_implications_text(attributes: Sequence[str], text: str) -> ImplicationSystem:
    sigma = ImplicationSystem()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            sigma.append(parse_implication(attributes, line))
        except InputError as exc:
            raise ParseError(str(exc), lineno) from None
    return sigma


def load_implications_json(attributes: Sequence[str], text: str) -> ImplicationSystem:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(payload, list):
        raise ParseError("expected a JSON array of implications")
    sigma = ImplicationSystem()
    for entry in payload:
        try:
            sigma.append(
                MixedImplication(
                    parse_mixed(attributes, entry["premise"]),
                    parse_mixed(attributes, entry["conclusion"]),
                )
            )
        except (KeyError, TypeError):
            raise ParseError("each implication needs 'premise' and 'conclusion' lists") from None
    return sigma


def holds(ctx: FormalContext, imp: MixedImplication) -> bool:
    """True iff every object satisfying the premise satisfies the conclusion."""
    ctx._check(imp.premise)
    ctx._check(imp.conclusion)
    lhs = ctx.mixed_down_mask(imp.premise)
    rhs = ctx.mixed_down_mask(imp.conclusion)
    return lhs & ~rhs == 0


def _violates(a: MixedSet, premise: MixedSet, conclusion: MixedSet) -> bool:
    if premise <= a and not conclusion <= a:
        return True
    missing = premise - a
    if len(missing) != 1:
        return False
    if not (a & conclusion.opposite()):
        return False
    return not (missing.opposite() <= a)


def is_closed_wrt(a: MixedSet, sigma: Iterable[MixedImplication]) -> bool:
    """Candidate filter used during mining.

    ``a`` is rejected when some ``B -> C`` has ``B ⊆ a`` and ``C ⊄ a``, or when
    ``B`` misses exactly one literal ``x`` of ``a``, ``a`` contradicts part of
    ``C`` and ``a`` does not already contain the opposite of ``x`` (the
    reflection rule would force it in).
    """
    if not a.is_consistent():
        raise InputError("is_closed_wrt requires a consistent set")
    return not any(_violates(a, imp.premise, imp.conclusion) for imp in sigma)


def _full_consistent_sets(n_attributes: int) -> np.ndarray:
    if n_attributes > MAX_ENTAILMENT_ATTRIBUTES:
        raise CapacityError(
            f"entailment enumerates 2^|M| sets; |M|={n_attributes} exceeds "
            f"{MAX_ENTAILMENT_ATTRIBUTES}"
        )
    return np.arange(1 << n_attributes, dtype=np.int64)


def _satisfies(pos: np.ndarray, full: int, s: MixedSet) -> np.ndarray:
    # full consistent set with positive part ``pos`` contains s
    return ((pos & s.pos) == s.pos) & (((~pos & full) & s.neg) == s.neg)


def models(sigma: Iterable[MixedImplication], n_attributes: int) -> np.ndarray:
    """Positive masks of the full consistent sets satisfying every implication."""
    full = (1 << n_attributes) - 1
    pos = _full_consistent_sets(n_attributes)
    keep = np.ones(pos.shape, dtype=bool)
    for imp in sigma:
        keep &= ~_satisfies(pos, full, imp.premise) | _satisfies(pos, full, imp.conclusion)
    return pos[keep]


def entails(
    sigma: Iterable[MixedImplication],
    imp: MixedImplication,
    n_attributes: int,
    model_set: np.ndarray | None = None,
) -> bool:
    """Semantic consequence over full consistent sets.

    ``model_set`` may be passed (from :func:`models`) when many implications are
    checked against the same Σ.
    """
    if model_set is None:
        model_set = models(sigma, n_attributes)
    full = (1 << n_attributes) - 1
    if (imp.premise.tot | imp.conclusion.tot) & ~full:
        raise InputError("implication refers to attributes outside the universe")
    if not imp.premise.is_consistent():
        return True
    has_premise = _satisfies(model_set, full, imp.premise)
    has_conclusion = _satisfies(model_set, full, imp.conclusion)
    return bool(np.all(~has_premise | has_conclusion))
