"""Formal contexts with positive and negative (mixed) derivation operators.

Attribute sets are stored as a pair of integer bitmasks over the attribute
list: bit ``i`` of ``pos`` means attribute ``i`` is asserted present, bit ``i``
of ``neg`` means it is asserted absent. Object sets are integer bitmasks over
the object list. Names only appear at the API boundary.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from .errors import InputError, ParseError

NEGATION = "~"


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class MixedSet:
    """A subset of M ∪ M̄ as two bitmasks. Supports ``<=``, ``|``, ``&``, ``-``."""

    pos: int = 0
    neg: int = 0

    @classmethod
    def full(cls, n_attributes: int) -> "MixedSet":
        """M ∪ M̄: every attribute with both polarities."""
        m = (1 << n_attributes) - 1
        return cls(m, m)

    @classmethod
    def from_row(cls, row_mask: int, n_attributes: int) -> "MixedSet":
        """The full consistent set describing one object row."""
        return cls(row_mask, ~row_mask & ((1 << n_attributes) - 1))

    @property
    def tot(self) -> int:
        return self.pos | self.neg

    def is_consistent(self) -> bool:
        return not (self.pos & self.neg)

    def is_full_consistent(self, n_attributes: int) -> bool:
        return self.is_consistent() and self.tot == (1 << n_attributes) - 1

    def opposite(self) -> "MixedSet":
        return MixedSet(self.neg, self.pos)

    def issubset(self, other: "MixedSet") -> bool:
        return not (self.pos & ~other.pos) and not (self.neg & ~other.neg)

    __le__ = issubset

    def __or__(self, other: "MixedSet") -> "MixedSet":
        return MixedSet(self.pos | other.pos, self.neg | other.neg)

    def __and__(self, other: "MixedSet") -> "MixedSet":
        return MixedSet(self.pos & other.pos, self.neg & other.neg)

    def __sub__(self, other: "MixedSet") -> "MixedSet":
        return MixedSet(self.pos & ~other.pos, self.neg & ~other.neg)

    def __len__(self) -> int:
        return self.pos.bit_count() + self.neg.bit_count()

    def __bool__(self) -> bool:
        return bool(self.pos or self.neg)

    def literals(self) -> Iterator[tuple[int, bool]]:
        """(attribute index, is_positive) in canonical order: by index, positive first."""
        for i in _bits(self.pos | self.neg):
            if self.pos >> i & 1:
                yield i, True
            if self.neg >> i & 1:
                yield i, False


def format_mixed(attributes: Sequence[str], s: MixedSet) -> str:
    """Render as ``a, ~b``; the empty set renders as an empty string."""
    return ", ".join(
        attributes[i] if positive else NEGATION + attributes[i]
        for i, positive in s.literals()
    )


def parse_mixed(attributes: Sequence[str], text: str | Iterable[str]) -> MixedSet:
    """Inverse of :func:`format_mixed`. Also accepts an iterable of tokens."""
    if isinstance(text, str):
        stripped = text.strip()
        tokens = [] if stripped in ("", "{}") else stripped.split(",")
    else:
        tokens = list(text)
    index = {name: i for i, name in enumerate(attributes)}
    pos = neg = 0
    for token in tokens:
        token = token.strip()
        negative = token.startswith(NEGATION)
        name = token[len(NEGATION):].strip() if negative else token
        if name not in index:
            raise InputError(f"unknown attribute {name!r}")
        if negative:
            neg |= 1 << index[name]
        else:
            pos |= 1 << index[name]
    return MixedSet(pos, neg)


class FormalContext:
    """Immutable ⟨G, M, I⟩ with classic and mixed derivation operators.

    Parameters
    ----------
    objects : sequence of str
        Object names, unique.
    attributes : sequence of str
        Attribute names, unique and non-empty. Declaration order is the
        canonical order used by every enumeration.
    incidence : array_like of bool, shape (len(objects), len(attributes))
    """

    def __init__(self, objects: Sequence[str], attributes: Sequence[str], incidence):
        self.objects = tuple(str(o) for o in objects)
        self.attributes = tuple(str(a) for a in attributes)
        if len(set(self.objects)) != len(self.objects):
            raise InputError("duplicate object names")
        if len(set(self.attributes)) != len(self.attributes):
            raise InputError("duplicate attribute names")
        if any(not a or a.startswith(NEGATION) for a in self.attributes):
            raise InputError(f"attribute names must be non-empty and not start with {NEGATION!r}")
        inc = np.array(incidence, dtype=bool).reshape(len(self.objects), len(self.attributes))
        inc.setflags(write=False)
        self.incidence = inc
        weights = [1 << j for j in range(len(self.attributes))]
        self.row_masks = tuple(
            sum(w for w, bit in zip(weights, row) if bit) for row in inc.tolist()
        )
        self._object_index = {o: i for i, o in enumerate(self.objects)}
        self._attribute_index = {a: j for j, a in enumerate(self.attributes)}

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def all_attributes(self) -> int:
        return (1 << self.n_attributes) - 1

    @property
    def all_objects(self) -> int:
        return (1 << self.n_objects) - 1

    def __eq__(self, other):
        if not isinstance(other, FormalContext):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.attributes == other.attributes
            and np.array_equal(self.incidence, other.incidence)
        )

    def __repr__(self):
        return f"FormalContext(|G|={self.n_objects}, |M|={self.n_attributes})"

    def rows_array(self) -> np.ndarray:
        """Row bitmasks as int64, the representation the kernels consume."""
        return np.array(self.row_masks, dtype=np.int64)

    # name <-> mask conversion

    def object_mask(self, objects: Iterable[str | int]) -> int:
        mask = 0
        for o in objects:
            if isinstance(o, (int, np.integer)) and not isinstance(o, bool):
                if not 0 <= o < self.n_objects:
                    raise InputError(f"object index {o} out of range")
                mask |= 1 << int(o)
            elif o in self._object_index:
                mask |= 1 << self._object_index[o]
            else:
                raise InputError(f"unknown object {o!r}")
        return mask

    def attribute_mask(self, attributes: Iterable[str]) -> int:
        mask = 0
        for a in attributes:
            if a not in self._attribute_index:
                raise InputError(f"unknown attribute {a!r}")
            mask |= 1 << self._attribute_index[a]
        return mask

    def object_names(self, mask: int) -> frozenset[str]:
        return frozenset(self.objects[i] for i in _bits(mask))

    def attribute_names(self, mask: int) -> frozenset[str]:
        return frozenset(self.attributes[i] for i in _bits(mask))

    def mixed(self, text: str | Iterable[str]) -> MixedSet:
        """Parse ``"Cu, ~Fe"`` (or a token list) against this context's attributes."""
        return parse_mixed(self.attributes, text)

    def format(self, s: MixedSet) -> str:
        return format_mixed(self.attributes, s)

    def _check(self, s: MixedSet) -> None:
        if (s.pos | s.neg) & ~self.all_attributes:
            raise InputError("mixed set refers to attributes outside this context")

    # mask-level operators

    def up_mask(self, extent: int) -> int:
        common = self.all_attributes
        for i in _bits(extent):
            common &= self.row_masks[i]
        return common

    def down_mask(self, intent: int) -> int:
        extent = 0
        for i, row in enumerate(self.row_masks):
            if row & intent == intent:
                extent |= 1 << i
        return extent

    def mixed_up_mask(self, extent: int) -> MixedSet:
        full = self.all_attributes
        pos = neg = full
        for i in _bits(extent):
            row = self.row_masks[i]
            pos &= row
            neg &= ~row
        return MixedSet(pos, neg & full)

    def mixed_down_mask(self, s: MixedSet) -> int:
        if not s.is_consistent():
            return 0
        extent = 0
        for i, row in enumerate(self.row_masks):
            if row & s.pos == s.pos and not row & s.neg:
                extent |= 1 << i
        return extent

    # name-level operators

    def derive_up(self, objects: Iterable[str]) -> frozenset[str]:
        """A↑: attributes shared by every object in ``objects``."""
        return self.attribute_names(self.up_mask(self.object_mask(objects)))

    def derive_down(self, attributes: Iterable[str]) -> frozenset[str]:
        """B↓: objects having every attribute in ``attributes``."""
        return self.object_names(self.down_mask(self.attribute_mask(attributes)))

    def mixed_up(self, objects: Iterable[str]) -> MixedSet:
        """Attributes present in all of ``objects`` plus negations of those absent from all."""
        return self.mixed_up_mask(self.object_mask(objects))

    def mixed_down(self, s: MixedSet) -> frozenset[str]:
        """Objects having every positive member of ``s`` and lacking every negated one."""
        self._check(s)
        return self.object_names(self.mixed_down_mask(s))

    def mixed_closure(self, s: MixedSet) -> MixedSet:
        """``mixed_up(mixed_down(s))``. Sets with empty support close to M ∪ M̄."""
        self._check(s)
        return self.mixed_up_mask(self.mixed_down_mask(s))

    def restrict(self, objects: Iterable[str | int]) -> "FormalContext":
        """Subcontext on the given objects, kept in original order."""
        mask = self.object_mask(objects)
        keep = list(_bits(mask))
        return FormalContext(
            [self.objects[i] for i in keep], self.attributes, self.incidence[keep]
        )


# CSV I/O


def load_context(source: TextIO | str) -> FormalContext:
    """Read a context from CSV text or a readable stream.

    The header row holds attribute names after a first cell that is empty or
    ``object``; each following row is an object name and one ``0``/``1`` cell per
    attribute.
    """
    text = source if isinstance(source, str) else source.read()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file: missing header row", 1) from None
    if not header or header[0].strip() not in ("", "object"):
        raise ParseError("first header cell must be empty or 'object'", 1)
    attributes = [h.strip() for h in header[1:]]
    seen = set()
    for a in attributes:
        if not a:
            raise ParseError("empty attribute name in header", 1)
        if a.startswith(NEGATION):
            raise ParseError(f"attribute name {a!r} starts with {NEGATION!r}", 1)
        if a in seen:
            raise ParseError(f"duplicate attribute {a!r}", 1)
        seen.add(a)

    objects, rows = [], []
    for record in reader:
        line = reader.line_num
        if not record or (len(record) == 1 and not record[0].strip()):
            continue
        if len(record) != len(attributes) + 1:
            raise ParseError(
                f"expected {len(attributes) + 1} cells, found {len(record)}", line
            )
        name = record[0].strip()
        if not name:
            raise ParseError("empty object name", line)
        if name in objects:
            raise ParseError(f"duplicate object {name!r}", line)
        row = []
        for col, cell in enumerate(record[1:], start=2):
            cell = cell.strip()
            if cell not in ("0", "1"):
                raise ParseError(f"cell {cell!r} in column {col} is not 0 or 1", line)
            row.append(cell == "1")
        objects.append(name)
        rows.append(row)
    incidence = np.array(rows, dtype=bool).reshape(len(objects), len(attributes))
    return FormalContext(objects, attributes, incidence)


def save_context(ctx: FormalContext, sink: TextIO | None = None) -> str:
    """Write ``ctx`` as CSV; returns the text and also writes it to ``sink`` if given."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["object", *ctx.attributes])
    for name, row in zip(ctx.objects, ctx.incidence.tolist()):
        writer.writerow([name, *("1" if v else "0" for v in row)])
    text = buf.getvalue()
    if sink is not None:
        sink.write(text)
    return text


def read_context(path) -> FormalContext:
    with open(path, encoding="utf-8", newline="") as fh:
        return load_context(fh)


def write_context(ctx: FormalContext, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        save_context(ctx, fh)
