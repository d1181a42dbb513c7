"""Menger-Urysohn order labels and branch-order signatures.

A point of a dendrite has order 1 (end point), 2 (regular point) or
n >= 3 (branch point), where n may be infinite.  Orders are represented
as plain ints, with ``math.inf`` standing for the infinite order; this
gives the total order 1 < 2 < 3 < ... < inf for free.  In JSON, DOT and
canonical codes the infinite order is always spelled ``"inf"``.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field

INFINITY = math.inf

#: An order label: a positive int, or INFINITY.
Label = int | float

END = 1
REGULAR = 2


def is_label(value) -> bool:
    """True if value is a legal order label (positive int or INFINITY)."""
    if value == INFINITY:
        return True
    return isinstance(value, int) and not isinstance(value, bool) and value >= 1


def label_token(label: Label) -> str:
    """Serialize a label: "1", "2", "3", ... or "inf"."""
    if label == INFINITY:
        return "inf"
    return str(int(label))


def parse_label(token) -> Label:
    """Parse a label from its JSON form (int, or the string "inf")."""
    if token == "inf" or token == INFINITY:
        return INFINITY
    if isinstance(token, int) and not isinstance(token, bool) and token >= 1:
        return token
    raise ValueError(f"not an order label: {token!r}")


def label_to_json(label: Label):
    """JSON form of a label: an int, or the string "inf"."""
    return "inf" if label == INFINITY else int(label)


@dataclass(frozen=True)
class Signature:
    """The set of branch-point orders realized by a dendrite.

    A nonempty finite set of labels, each >= 3 or infinite.  A vertex
    label is admissible when it lies in {1, 2} or in the signature.
    """

    labels: frozenset = field()

    def __init__(self, labels):
        labels = frozenset(labels)
        if not labels:
            raise ValueError("signature must be nonempty")
        for l in labels:
            if not is_label(l) or l < 3:
                raise ValueError(f"signature labels must be >= 3 or inf, got {l!r}")
        object.__setattr__(self, "labels", labels)

    def __contains__(self, label) -> bool:
        return label in self.labels

    def __iter__(self):
        return iter(self.sorted_labels())

    def sorted_labels(self) -> tuple:
        """Branch orders in increasing order, INFINITY last."""
        return tuple(sorted(self.labels))

    @property
    def min_branch_order(self) -> Label:
        return min(self.labels)

    def vertex_labels(self) -> tuple:
        """All admissible vertex labels: (1, 2, *branch orders)."""
        return (END, REGULAR) + self.sorted_labels()

    def insertable_labels(self) -> tuple:
        """Labels admissible in the interior of an arc: (2, *branch orders)."""
        return (REGULAR,) + self.sorted_labels()

    def admits(self, label) -> bool:
        return label in (END, REGULAR) or label in self.labels

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse a comma-separated signature such as "3" or "3,inf"."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise ValueError("empty signature")
        labels = []
        for p in parts:
            if p == "inf":
                labels.append(INFINITY)
            else:
                try:
                    labels.append(int(p))
                except ValueError:
                    raise ValueError(f"bad signature entry {p!r}") from None
        return cls(labels)

    def token(self) -> str:
        return ",".join(label_token(l) for l in self.sorted_labels())

    def to_json(self) -> list:
        return [label_to_json(l) for l in self.sorted_labels()]


def derive_seed(seed: int, *salts) -> int:
    """Mix a base seed with salt values into a new deterministic seed.

    Stable across runs and platforms (no reliance on salted hash()).
    """
    acc = zlib.crc32(repr(int(seed)).encode())
    for s in salts:
        acc = zlib.crc32(repr(s).encode(), acc)
    return acc
