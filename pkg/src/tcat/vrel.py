"""Quantale-valued relations between finite carriers.

A relation r from X to Y is a dense X-by-Y matrix of quantale values.
Composition is matrix multiplication over (join, tensor); the residuals of
composition (``extend`` and ``lift``) are computed pointwise with ``hom``.
Everything is immutable, so values are safe to share and to use as dict
keys.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CarrierMismatchError
from .quantale import Quantale


class Carrier:
    """Ordered list of distinct element labels.

    The order is part of the data: it fixes matrix row/column indexing and
    serialization.  Labels are strings at the user boundary; derived
    carriers (words, pairs, presheaf vectors) use hashable tuples.
    """

    __slots__ = ("labels", "_index")

    def __init__(self, labels):
        labels = tuple(labels)
        index = {}
        for i, lab in enumerate(labels):
            if lab in index:
                raise CarrierMismatchError(f"duplicate label {lab!r}")
            index[lab] = i
        self.labels = labels
        self._index = index

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise CarrierMismatchError(f"label {label!r} not in carrier") from None

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self._index

    def __eq__(self, other):
        return isinstance(other, Carrier) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"Carrier({list(self.labels)!r})"


def format_label(label):
    """Human-readable form of a (possibly nested) carrier label."""
    if isinstance(label, tuple):
        return "(" + ",".join(format_label(l) for l in label) + ")"
    return str(label)


@dataclass(frozen=True)
class VRel:
    """Matrix dom x cod of quantale values."""

    quantale: Quantale
    dom: Carrier
    cod: Carrier
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != len(self.dom):
            raise CarrierMismatchError("row count does not match dom")
        q = self.quantale
        for row in self.entries:
            if len(row) != len(self.cod):
                raise CarrierMismatchError("column count does not match cod")
            for v in row:
                q.check(v)

    # -- constructors ------------------------------------------------------
    @staticmethod
    def from_rows(quantale, dom, cod, rows):
        return VRel(quantale, dom, cod, tuple(tuple(r) for r in rows))

    @staticmethod
    def build(quantale, dom, cod, fn):
        """Entry (x, y) = fn(x, y) on labels."""
        rows = tuple(tuple(fn(x, y) for y in cod.labels) for x in dom.labels)
        return VRel(quantale, dom, cod, rows)

    @staticmethod
    def identity(quantale, carrier):
        k, bot = quantale.unit, quantale.bottom
        rows = tuple(
            tuple(k if i == j else bot for j in range(len(carrier)))
            for i in range(len(carrier))
        )
        return VRel(quantale, carrier, carrier, rows)

    @staticmethod
    def graph(quantale, dom, cod, mapping):
        """Graph of a total function given as a tuple of cod indices."""
        if len(mapping) != len(dom):
            raise CarrierMismatchError("mapping does not cover dom")
        k, bot = quantale.unit, quantale.bottom
        rows = tuple(
            tuple(k if mapping[i] == j else bot for j in range(len(cod)))
            for i in range(len(dom))
        )
        return VRel(quantale, dom, cod, rows)

    @staticmethod
    def constant(quantale, dom, cod, value):
        quantale.check(value)
        rows = tuple(tuple(value for _ in range(len(cod))) for _ in range(len(dom)))
        return VRel(quantale, dom, cod, rows)

    # -- access ------------------------------------------------------------
    def at(self, i, j):
        return self.entries[i][j]

    def get(self, x, y):
        return self.entries[self.dom.index(x)][self.cod.index(y)]

    # -- algebra -----------------------------------------------------------
    def _require_same_quantale(self, other):
        if self.quantale != other.quantale:
            raise CarrierMismatchError(
                f"quantale mismatch: {self.quantale.name} vs {other.quantale.name}"
            )

    def then(self, other):
        """Diagrammatic composite: self from X to Y, other from Y to Z."""
        self._require_same_quantale(other)
        if self.cod != other.dom:
            raise CarrierMismatchError("middle carriers differ in composition")
        q = self.quantale
        mid = range(len(self.cod))
        rows = tuple(
            tuple(
                q.join(q.tensor(self.entries[i][m], other.entries[m][j]) for m in mid)
                for j in range(len(other.cod))
            )
            for i in range(len(self.dom))
        )
        return VRel(q, self.dom, other.cod, rows)

    def involution(self):
        rows = tuple(
            tuple(self.entries[i][j] for i in range(len(self.dom)))
            for j in range(len(self.cod))
        )
        return VRel(self.quantale, self.cod, self.dom, rows)

    def leq(self, other):
        self._require_same_quantale(other)
        if self.dom != other.dom or self.cod != other.cod:
            raise CarrierMismatchError("cannot compare relations of different shape")
        q = self.quantale
        return all(
            q.leq(self.entries[i][j], other.entries[i][j])
            for i in range(len(self.dom))
            for j in range(len(self.cod))
        )

    def join_with(self, other):
        self._require_same_quantale(other)
        if self.dom != other.dom or self.cod != other.cod:
            raise CarrierMismatchError("cannot join relations of different shape")
        q = self.quantale
        rows = tuple(
            tuple(
                q.join((self.entries[i][j], other.entries[i][j]))
                for j in range(len(self.cod))
            )
            for i in range(len(self.dom))
        )
        return VRel(q, self.dom, self.cod, rows)


def compose(r, s):
    """Composite of r: X -> Y and s: Y -> Z, in diagram order."""
    return r.then(s)


def involution(r):
    return r.involution()


def graph_of(quantale, dom, cod, label_map):
    """Graph of a function given label-by-label (dict or callable)."""
    fn = label_map.__getitem__ if isinstance(label_map, dict) else label_map
    mapping = tuple(cod.index(fn(x)) for x in dom.labels)
    return VRel.graph(quantale, dom, cod, mapping)


def extend(r, t):
    """Largest s: Z -> Y with s after t below r, where r: X -> Y, t: X -> Z.

    Pointwise: (r extended along t)(z, y) = meet over x of
    hom(t(x, z), r(x, y)).
    """
    r._require_same_quantale(t)
    if r.dom != t.dom:
        raise CarrierMismatchError("extension needs a common source")
    q = r.quantale
    xs = range(len(r.dom))
    rows = tuple(
        tuple(
            q.meet(q.hom(t.entries[x][z], r.entries[x][y]) for x in xs)
            for y in range(len(r.cod))
        )
        for z in range(len(t.cod))
    )
    return VRel(q, t.cod, r.cod, rows)


def lift(t, r):
    """Largest s: Y -> X with t after s below r, where t: X -> Z, r: Y -> Z.

    Pointwise: (r lifted along t)(y, x) = meet over z of
    hom(t(x, z), r(y, z)).
    """
    t._require_same_quantale(r)
    if t.cod != r.cod:
        raise CarrierMismatchError("lifting needs a common target")
    q = t.quantale
    zs = range(len(t.cod))
    rows = tuple(
        tuple(
            q.meet(q.hom(t.entries[x][z], r.entries[y][z]) for z in zs)
            for x in range(len(t.dom))
        )
        for y in range(len(r.dom))
    )
    return VRel(q, r.dom, t.dom, rows)
