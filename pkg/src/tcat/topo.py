"""Finite topological spaces as convergence categories, and the filter
model of their presheaf category.

On a finite set every ultrafilter is principal, so convergence reduces to
the specialization relation: the point ultrafilter at x' converges to x
exactly when x lies in the closure of {x'}.  A finite space is therefore
the same thing as a preorder (the Alexandroff correspondence), and the
presheaf category of the resulting convergence category is concretely the
space of filters on the open-set lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cat import TCategory, TFunctorMap, is_functor
from .errors import CarrierMismatchError
from .presheaf import f_pull_vector, hat, yoneda_vector
from .quantale import Bool2
from .theory import UltrafilterTheory
from .vrel import Carrier, VRel


@dataclass(frozen=True)
class FiniteSpace:
    points: Carrier
    opens: tuple  # frozensets of point labels

    def __post_init__(self):
        pts = frozenset(self.points.labels)
        seen = set()
        for u in self.opens:
            if not isinstance(u, frozenset) or not u <= pts:
                raise CarrierMismatchError("opens must be frozensets of points")
            if u in seen:
                raise CarrierMismatchError("duplicate open set")
            seen.add(u)
        if frozenset() not in seen or pts not in seen:
            raise CarrierMismatchError("topology must contain the empty and full sets")
        for u in self.opens:
            for v in self.opens:
                if u | v not in seen or u & v not in seen:
                    raise CarrierMismatchError("opens must be a lattice of sets")

    @staticmethod
    def make(points, opens):
        """Normalize raw input: sorts the opens by size then point order."""
        pts = Carrier(tuple(points))
        order = {p: i for i, p in enumerate(pts.labels)}
        key = lambda u: (len(u), sorted(order[p] for p in u))
        sets = sorted({frozenset(u) for u in opens}, key=key)
        return FiniteSpace(pts, tuple(sets))

    def closure(self, subset):
        """Smallest closed superset."""
        pts = frozenset(self.points.labels)
        acc = pts
        for u in self.opens:
            c = pts - u
            if subset <= c and len(c) < len(acc):
                acc = c
        # intersect all closed supersets for safety with non-chains
        out = pts
        for u in self.opens:
            c = pts - u
            if subset <= c:
                out = out & c
        return out

    def neighborhood_filter(self, point):
        return frozenset(u for u in self.opens if point in u)

    def is_t0(self):
        for x, y in itertools.combinations(self.points.labels, 2):
            if self.neighborhood_filter(x) == self.neighborhood_filter(y):
                return False
        return True


def to_tcat(space: FiniteSpace) -> TCategory:
    """Principal convergence as structure: entry (x', x) is whether x lies
    in the closure of {x'}."""
    th = UltrafilterTheory(Bool2())
    pts = space.points
    rows = tuple(
        tuple(x in space.closure(frozenset((xp,))) for x in pts.labels)
        for xp in pts.labels
    )
    return TCategory(th, pts, VRel(Bool2(), pts, pts, rows))


def from_preorder(cat: TCategory) -> FiniteSpace:
    """Alexandroff inverse: the opens are exactly the structure-absorbing
    point sets."""
    pts = cat.carrier
    a = cat.structure
    opens = []
    for bits in itertools.product((False, True), repeat=len(pts)):
        ok = True
        for i in range(len(pts)):
            for j in range(len(pts)):
                if bits[j] and a.entries[i][j] and not bits[i]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            opens.append(frozenset(p for p, b in zip(pts.labels, bits) if b))
    return FiniteSpace.make(pts.labels, opens)


# ---------------------------------------------------------------------------
# filters on the open-set lattice


def open_filters(space: FiniteSpace):
    """All upward-closed, intersection-closed, nonempty families of opens;
    the improper filter (all opens) is included.  Deterministic order:
    larger filters first by membership bitmask."""
    opens = space.opens
    n = len(opens)
    out = []
    for bits in itertools.product((False, True), repeat=n):
        members = [opens[i] for i in range(n) if bits[i]]
        if not members:
            continue
        fam = set(members)
        ok = True
        for u in members:
            for v in members:
                if (u & v) not in fam:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for u in members:
                for w in opens:
                    if u <= w and w not in fam:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            out.append(frozenset(fam))
    out.sort(key=lambda f: (len(f), sorted(space.opens.index(u) for u in f)))
    return tuple(out)


def filter_space(space: FiniteSpace) -> FiniteSpace:
    """The filters with the topology generated by the sets of filters
    containing the complement of a closed set."""
    filters = open_filters(space)
    pts = frozenset(space.points.labels)
    basis = []
    for u in space.opens:
        closed = pts - u  # u is the complement of a closed set
        basis.append(frozenset(f for f in filters if u in f))
    # close the basis under intersections, then unions
    sets = {frozenset(), frozenset(filters)}
    for b in basis:
        sets.add(b)
    changed = True
    while changed:
        changed = False
        cur = list(sets)
        for s1 in cur:
            for s2 in cur:
                for cand in (s1 & s2, s1 | s2):
                    if cand not in sets:
                        sets.add(cand)
                        changed = True
    return FiniteSpace.make(filters, sets)


@dataclass(frozen=True)
class PhiReport:
    bijective: bool
    structure_preserving: bool
    neighborhood_ok: bool
    improper_involved: bool

    @property
    def ok(self):
        return self.bijective and self.structure_preserving and self.neighborhood_ok


def phi_map(space: FiniteSpace, cat: TCategory, vector):
    """Presheaf to filter: the opens containing the support of the vector."""
    support = frozenset(
        x for x, v in zip(cat.carrier.labels, vector) if v
    )
    return frozenset(u for u in space.opens if support <= u)


def phi_iso_check(space: FiniteSpace) -> PhiReport:
    """The presheaf category of the convergence category matches the
    filter space: same size, same structure through the support map, and
    representables go to neighborhood filters."""
    cat = to_tcat(space)
    h = hat(cat)
    fsp = filter_space(space)
    fcat = to_tcat(fsp)
    phi = [phi_map(space, cat, v) for v in h.vectors]

    bijective = len(set(phi)) == len(phi) and set(phi) == set(fsp.points.labels)
    improper = frozenset(space.opens)
    improper_involved = False
    structure_ok = True
    if bijective:
        fidx = [fsp.points.index(p) for p in phi]
        biga = h.cat.structure
        bigb = fcat.structure
        for i in range(len(phi)):
            for j in range(len(phi)):
                if biga.entries[i][j] != bigb.entries[fidx[i]][fidx[j]]:
                    structure_ok = False
                    if improper in (phi[i], phi[j]):
                        improper_involved = True
                    break
            if not structure_ok:
                break
    else:
        structure_ok = False
    nbhd_ok = all(
        phi_map(space, cat, yoneda_vector(cat, x)) == space.neighborhood_filter(x)
        for x in space.points.labels
    )
    return PhiReport(bijective, structure_ok, nbhd_ok, improper_involved)


# ---------------------------------------------------------------------------
# continuous maps and naturality


def is_continuous(src: FiniteSpace, dst: FiniteSpace, label_map):
    fn = label_map.__getitem__ if isinstance(label_map, dict) else label_map
    for u in dst.opens:
        pre = frozenset(x for x in src.points.labels if fn(x) in u)
        if pre not in src.opens:
            return False
    return True


def continuous_maps(src: FiniteSpace, dst: FiniteSpace):
    """All continuous maps, as label dicts, in codomain-order product
    order."""
    out = []
    for combo in itertools.product(dst.points.labels, repeat=len(src.points)):
        m = dict(zip(src.points.labels, combo))
        if is_continuous(src, dst, m):
            out.append(m)
    return out


def filter_pushforward(src: FiniteSpace, dst: FiniteSpace, label_map, flt):
    """Preimage filter: generated by preimages of the members."""
    fn = label_map.__getitem__ if isinstance(label_map, dict) else label_map
    gen = [
        frozenset(x for x in src.points.labels if fn(x) in u) for u in flt
    ]
    fam = set()
    for g in gen:
        for u in src.opens:
            if g <= u:
                fam.add(u)
    return frozenset(fam)


def phi_naturality_check(src: FiniteSpace, dst: FiniteSpace, label_map) -> bool:
    """Pulling a presheaf back along a continuous map then taking filters
    agrees with taking filters first and pushing them forward."""
    if not is_continuous(src, dst, label_map):
        raise CarrierMismatchError("map is not continuous")
    csrc, cdst = to_tcat(src), to_tcat(dst)
    f = TFunctorMap.from_labels(csrc, cdst, label_map)
    if not is_functor(f):
        return False
    hdst = hat(cdst)
    for vec in hdst.vectors:
        lhs = phi_map(src, csrc, f_pull_vector(f, vec))
        rhs = filter_pushforward(src, dst, label_map, phi_map(dst, cdst, vec))
        if lhs != rhs:
            return False
    return True
