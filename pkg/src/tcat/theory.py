"""Monad-with-evaluation instances on finite carriers.

A theory packages a Set-monad (T, unit, mult) together with an evaluation
map that collapses a T-bag of quantale values into a single value.  Three
instances ship:

* identity      -- T is the identity; enriched categories over V as-is.
* ultrafilter   -- on finite sets every ultrafilter is principal, so the
                   monad part coincides with the identity; kept separate so
                   topological instances carry their intended reading.
* word (bounded) -- T X is the set of words over X up to a length bound;
                   mult is concatenation and is partial (undefined when the
                   result would exceed the bound).  Universal checks in this
                   mode are only meaningful within the bound.

Everything downstream is written against the small primitive surface below
(letters of a T-element, reassembly, value combination), so the identity
and word cases run the same construction code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BoundOverflowError, CarrierMismatchError, SpecMismatchError
from .quantale import Quantale, quantale_from_json
from .vrel import Carrier, VRel


class Theory:
    def __init__(self, quantale: Quantale):
        self.quantale = quantale
        self._t_cache = {}

    # -- primitive surface, per instance ------------------------------------
    def t(self, carrier: Carrier) -> Carrier:
        """The carrier T X, enumerated in a fixed order."""
        raise NotImplementedError

    def t_letters(self, label):
        """The tuple of X-letters of a T X element."""
        raise NotImplementedError

    def t_from_letters(self, letters):
        """Reassemble a T X element from letters; None when out of bound."""
        raise NotImplementedError

    def combine_values(self, values):
        """Collapse the value letters of a T V element into one value."""
        raise NotImplementedError

    def kind_json(self):
        raise NotImplementedError

    @property
    def kind(self):
        raise NotImplementedError

    def __eq__(self, other):
        return (
            isinstance(other, Theory)
            and self.kind == other.kind
            and self.quantale == other.quantale
            and self.kind_json() == other.kind_json()
        )

    def __hash__(self):
        return hash((self.kind, repr(self.kind_json()), self.quantale))

    def __repr__(self):
        return f"Theory({self.kind}, {self.quantale.name})"

    # -- derived, shared by all instances ------------------------------------
    def unit_label(self, x):
        lab = self.t_from_letters((x,))
        assert lab is not None
        return lab

    def unit_map(self, X: Carrier):
        """Indices of the unit X -> T X."""
        TX = self.t(X)
        return tuple(TX.index(self.unit_label(x)) for x in X.labels)

    def mult_label(self, W):
        """Flatten one T-level; None when the result is out of bound."""
        inner = []
        for w in self.t_letters(W):
            inner.extend(self.t_letters(w))
        return self.t_from_letters(tuple(inner))

    def mult_preimages(self, label):
        """All T(T X) elements flattening to the given T X element."""
        raise NotImplementedError

    def t_fn(self, label_fn):
        """Apply T to a function given on labels; acts letterwise."""

        def lifted(t_label):
            out = self.t_from_letters(
                tuple(label_fn(l) for l in self.t_letters(t_label))
            )
            assert out is not None  # letter count is preserved
            return out

        return lifted

    def t_fn_indices(self, mapping, X: Carrier, Y: Carrier):
        """Index form of t_fn for mapping: X -> Y given as cod indices."""
        fn = lambda lab: Y.labels[mapping[X.index(lab)]]
        lifted = self.t_fn(fn)
        TX, TY = self.t(X), self.t(Y)
        return tuple(TY.index(lifted(u)) for u in TX.labels)

    # T applied to a relation r: X -> Y, pointwise on matching shapes.
    def t_rel_entry(self, rel: VRel, a_label, b_label):
        la, lb = self.t_letters(a_label), self.t_letters(b_label)
        if len(la) != len(lb):
            return self.quantale.bottom
        return self.combine_values(tuple(rel.get(x, y) for x, y in zip(la, lb)))

    def t_rel(self, rel: VRel) -> VRel:
        TD, TC = self.t(rel.dom), self.t(rel.cod)
        return VRel.build(
            self.quantale, TD, TC, lambda a, b: self.t_rel_entry(rel, a, b)
        )

    def t_rel_support_dom(self, rel: VRel, b_label, flat_cap=None):
        """Pairs (a_label, value) with value = (T rel)(a, b) above bottom.

        ``a`` ranges over T(dom) elements of the same shape as ``b``.  When
        ``flat_cap`` is given, partial products whose letters flatten to
        more than the cap are pruned (used when the caller will flatten a).
        """
        q = self.quantale
        bot = q.bottom
        letters_b = self.t_letters(b_label)
        supports = []
        for y in letters_b:
            col = [
                (x, rel.get(x, y)) for x in rel.dom.labels if rel.get(x, y) != bot
            ]
            if not col:
                return
            supports.append(col)

        def rec(i, chosen, flat, value):
            if i == len(supports):
                lab = self.t_from_letters(tuple(chosen))
                if lab is not None:
                    yield lab, value
                return
            for x, v in supports[i]:
                nf = flat + len(self.t_letters(x))
                if flat_cap is not None and nf > flat_cap:
                    continue
                yield from rec(i + 1, chosen + [x], nf, q.tensor(value, v))

        if not supports:
            lab = self.t_from_letters(())
            if lab is not None:
                yield lab, self.combine_values(())
            return
        yield from rec(0, [], 0, q.unit)

    def t_rel_support_cod(self, rel: VRel, a_label):
        """Pairs (b_label, value) with value = (T rel)(a, b) above bottom."""
        q = self.quantale
        bot = q.bottom
        letters_a = self.t_letters(a_label)
        supports = []
        for x in letters_a:
            row = [
                (y, rel.get(x, y)) for y in rel.cod.labels if rel.get(x, y) != bot
            ]
            if not row:
                return
            supports.append(row)
        if not supports:
            lab = self.t_from_letters(())
            if lab is not None:
                yield lab, self.combine_values(())
            return
        for combo in itertools.product(*supports):
            lab = self.t_from_letters(tuple(y for y, _ in combo))
            if lab is None:
                continue
            yield lab, self.combine_values(tuple(v for _, v in combo))


class IdentityTheory(Theory):
    kind = "identity"

    def t(self, carrier):
        return carrier

    def t_letters(self, label):
        return (label,)

    def t_from_letters(self, letters):
        if len(letters) != 1:
            raise BoundOverflowError("identity theory holds exactly one letter")
        return letters[0]

    def combine_values(self, values):
        if len(values) != 1:
            raise BoundOverflowError("identity theory combines exactly one value")
        return values[0]

    def mult_preimages(self, label):
        return (label,)

    def t_rel(self, rel):
        return rel

    def kind_json(self):
        return "identity"


class UltrafilterTheory(IdentityTheory):
    """Principal-ultrafilter convergence on finite carriers.

    Every ultrafilter on a finite set is principal, so T, unit and mult
    coincide with the identity; the evaluation map sends the principal
    ultrafilter at a value to that value.
    """

    kind = "ultrafilter"

    def kind_json(self):
        return "ultrafilter"


class WordTheory(Theory):
    kind = "word"

    def __init__(self, quantale, bound=3):
        super().__init__(quantale)
        if bound < 1:
            raise SpecMismatchError("word bound must be positive")
        self.bound = bound

    def t(self, carrier):
        key = carrier.labels
        cached = self._t_cache.get(key)
        if cached is not None:
            return cached
        words = []
        for n in range(self.bound + 1):
            words.extend(itertools.product(carrier.labels, repeat=n))
        out = Carrier(words)
        self._t_cache[key] = out
        return out

    def t_letters(self, label):
        return label

    def t_from_letters(self, letters):
        return tuple(letters) if len(letters) <= self.bound else None

    def combine_values(self, values):
        q = self.quantale
        acc = q.unit
        for v in values:
            acc = q.tensor(acc, v)
        return acc

    def mult_preimages(self, label):
        """All splittings of the word into at most ``bound`` parts, empty
        parts included."""

        def rec(seq, parts_left):
            if seq == ():
                yield ()
            if parts_left == 0:
                return
            for l in range(0, min(len(seq), self.bound) + 1):
                head = seq[:l]
                for rest in rec(seq[l:], parts_left - 1):
                    yield (head,) + rest

        return rec(tuple(label), self.bound)

    def kind_json(self):
        return {"word": self.bound}


def theory_from_json(obj, quantale):
    if obj == "identity":
        return IdentityTheory(quantale)
    if obj == "ultrafilter":
        return UltrafilterTheory(quantale)
    if isinstance(obj, dict) and set(obj) == {"word"} and type(obj["word"]) is int:
        return WordTheory(quantale, obj["word"])
    raise SpecMismatchError(f"unknown theory spec {obj!r}")


@dataclass(frozen=True)
class TRel:
    """Relation from X to Y whose source has been fattened to T X."""

    theory: Theory
    dom: Carrier
    rel: VRel

    def __post_init__(self):
        if self.rel.dom != self.theory.t(self.dom):
            raise CarrierMismatchError("underlying matrix is not indexed by T(dom)")
        if self.rel.quantale != self.theory.quantale:
            raise CarrierMismatchError("relation and theory quantales differ")

    @property
    def cod(self):
        return self.rel.cod

    @staticmethod
    def build(theory, dom, cod, fn):
        return TRel(theory, dom, VRel.build(theory.quantale, theory.t(dom), cod, fn))


def unit_op(theory, X):
    """The transposed unit as a relation from X to X (k on unit images)."""
    TX = theory.t(X)
    mapping = theory.unit_map(X)
    return TRel(theory, X, VRel.graph(theory.quantale, X, TX, mapping).involution())


def kleisli(beta: TRel, alpha: TRel) -> TRel:
    """Convolution of alpha: X -> Y with beta: Y -> Z.

    Entry (tx, z) joins, over all splittings W of tx and all ty matching
    W's shape, (T alpha)(W, ty) * beta(ty, z).  In word mode the splittings
    range over words-of-words within bound.
    """
    th = alpha.theory
    if th != beta.theory:
        raise CarrierMismatchError("theories differ")
    if alpha.cod != beta.dom:
        raise CarrierMismatchError("middle carriers differ in convolution")
    q = th.quantale
    X, Z = alpha.dom, beta.cod
    TX = th.t(X)
    rows = []
    for tx in TX.labels:
        acc = {z: [] for z in Z.labels}
        for big in th.mult_preimages(tx):
            for ty, v in th.t_rel_support_cod(alpha.rel, big):
                row = beta.rel.entries[beta.rel.dom.index(ty)]
                for j, z in enumerate(Z.labels):
                    acc[z].append(q.tensor(v, row[j]))
        rows.append(tuple(q.join(acc[z]) for z in Z.labels))
    return TRel(th, X, VRel(q, TX, Z, tuple(rows)))


def unitary(alpha: TRel) -> bool:
    """True when absorbing the codomain unit leaves alpha unchanged."""
    e = unit_op(alpha.theory, alpha.cod)
    return kleisli(e, alpha).rel == alpha.rel


def kleisli_extend(gamma: TRel, alpha: TRel) -> TRel:
    """Largest beta with (beta after alpha) below gamma, for
    gamma: X -> Z and alpha: X -> Y; the result is a relation Y -> Z.

    Computed as the plain matrix extension of gamma along the composite
    (T alpha) after the transposed mult.
    """
    th = gamma.theory
    if th != alpha.theory:
        raise CarrierMismatchError("theories differ")
    if gamma.dom != alpha.dom:
        raise CarrierMismatchError("extension needs a common source")
    q = th.quantale
    X = alpha.dom
    TX, TY = th.t(X), th.t(alpha.cod)
    # q_rel(tx, ty) = join over splittings of tx of (T alpha)(splitting, ty)
    rows = []
    for tx in TX.labels:
        acc = {ty: [] for ty in TY.labels}
        for big in th.mult_preimages(tx):
            for ty, v in th.t_rel_support_cod(alpha.rel, big):
                acc[ty].append(v)
        rows.append(tuple(q.join(acc[ty]) for ty in TY.labels))
    q_rel = VRel(q, TX, TY, tuple(rows))
    from .vrel import extend as vextend

    return TRel(th, alpha.cod, vextend(gamma.rel, q_rel))
