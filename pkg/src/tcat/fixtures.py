"""Built-in fixture library: enumerations of small categories, canonical
lattices and metric spaces, partitions, and embedding suites.

The enumerators are deliberately brute force; they double as independent
oracles for the checkers (for instance the complete-lattice test below
never touches the presheaf machinery).
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache

from .cat import TCategory, TFunctorMap, check_category, is_functor
from .errors import CapabilityError, CarrierMismatchError
from .quantale import Bool2, Lawvere
from .theory import IdentityTheory, TRel, kleisli, unit_op, unitary
from .vrel import Carrier, VRel

DEFAULT_LABELS = ("a", "b", "c", "d", "e", "f")


def _labels(n):
    return DEFAULT_LABELS[:n]


@lru_cache(maxsize=None)
def all_categories(theory, labels):
    """Every category structure on the given labels: diagonal-style cells
    range over values above the unit, the rest over the whole carrier,
    filtered by the axioms."""
    q = theory.quantale
    if not q.enumerable:
        raise CapabilityError("category enumeration needs an enumerable quantale")
    X = Carrier(labels)
    TX = theory.t(X)
    e = theory.unit_map(X)
    above_unit = tuple(v for v in q.elements() if q.leq(q.unit, v))
    cells = []
    for ti in range(len(TX)):
        for j in range(len(X)):
            cells.append(above_unit if ti == e[j] else q.elements())
    out = []
    for combo in itertools.product(*cells):
        rows = tuple(
            tuple(combo[ti * len(X) + j] for j in range(len(X)))
            for ti in range(len(TX))
        )
        structure = VRel(q, TX, X, rows)
        if check_category(theory, X, structure).ok:
            out.append(TCategory(theory, X, structure))
    return tuple(out)


def bool_preorders(n):
    """All preorders on n labeled points, as identity-theory categories."""
    return all_categories(IdentityTheory(Bool2()), _labels(n))


def preorders_upto(n):
    out = []
    for k in range(1, n + 1):
        out.extend(bool_preorders(k))
    return tuple(out)


def canonical_forms(cats):
    """One representative per isomorphism class (minimal structure tuple
    over carrier permutations)."""
    seen = {}
    for cat in cats:
        n = len(cat.carrier)
        e = cat.theory.unit_map(cat.carrier)
        best = None
        for perm in itertools.permutations(range(n)):
            # permute both the points and (through unit naturality) the rows
            key = tuple(
                cat.structure.entries[e[perm[i]]][perm[j]]
                for i in range(n)
                for j in range(n)
            )
            if best is None or key < best:
                best = key
        seen.setdefault((n, best), cat)
    return tuple(seen.values())


# ---------------------------------------------------------------------------
# order-theoretic oracle


def underlying_leq(cat):
    q = cat.quantale
    e = cat.theory.unit_map(cat.carrier)
    a = cat.structure
    n = len(cat.carrier)
    return [
        [q.leq(q.unit, a.entries[e[i]][j]) for j in range(n)] for i in range(n)
    ]


def has_all_joins(cat) -> bool:
    """Least upper bounds for every subset of points, straight from the
    point order; the preorder counterpart of being a complete lattice."""
    le = underlying_leq(cat)
    n = len(cat.carrier)
    for mask in range(1 << n):
        members = [i for i in range(n) if mask & (1 << i)]
        uppers = [u for u in range(n) if all(le[m][u] for m in members)]
        if not any(all(le[u][v] for v in uppers) for u in uppers):
            return False
    return True


def is_complete_lattice(cat) -> bool:
    return has_all_joins(cat)


# ---------------------------------------------------------------------------
# canonical categories


def chain_cat(n, theory=None):
    th = theory or IdentityTheory(Bool2())
    q = th.quantale
    X = Carrier(_labels(n))
    vcat_rows = tuple(
        tuple(q.unit if i <= j else q.bottom for j in range(n)) for i in range(n)
    )
    base = TCategory(IdentityTheory(q), X, VRel(q, X, X, vcat_rows))
    if isinstance(th, IdentityTheory):
        return TCategory(th, X, base.structure)
    from .cat import free_t

    return free_t(base, th)


def antichain_cat(n, theory=None):
    th = theory or IdentityTheory(Bool2())
    from .cat import discrete

    return discrete(th, Carrier(_labels(n)))


def diamond_cat():
    """Four-element lattice: bottom, two incomparable middles, top."""
    q = Bool2()
    th = IdentityTheory(q)
    X = Carrier(("bot", "l", "r", "top"))
    le = {
        ("bot", "bot"), ("bot", "l"), ("bot", "r"), ("bot", "top"),
        ("l", "l"), ("l", "top"), ("r", "r"), ("r", "top"), ("top", "top"),
    }
    rows = tuple(
        tuple((x, y) in le for y in X.labels) for x in X.labels
    )
    return TCategory(th, X, VRel(q, X, X, rows))


def complete_lattices_upto(n):
    """Representatives of all separated complete-lattice preorders with at
    most n points."""
    out = []
    for cat in canonical_forms(preorders_upto(n)):
        from .cat import l_separated

        if l_separated(cat) and is_complete_lattice(cat):
            out.append(cat)
    return tuple(out)


def metric_cat(labels, rows):
    """Identity-theory category over the distance quantale from an exact
    matrix (entries Fraction or the infinity singleton)."""
    q = Lawvere()
    th = IdentityTheory(q)
    X = Carrier(labels)
    structure = VRel.from_rows(q, X, X, rows)
    rep = check_category(th, X, structure)
    if not rep.ok:
        raise CarrierMismatchError(f"distance matrix breaks the axioms: {rep.describe()}")
    return TCategory(th, X, structure)


def standard_metric_fixtures():
    F = Fraction
    two_sym = metric_cat(("p", "q"), [[F(0), F(1)], [F(1), F(0)]])
    two_asym = metric_cat(("p", "q"), [[F(0), F(1, 2)], [F(3), F(0)]])
    three = metric_cat(
        ("p", "q", "r"),
        [
            [F(0), F(1, 2), F(2)],
            [F(1), F(0), F(3, 2)],
            [F(2), F(1), F(0)],
        ],
    )
    return (two_sym, two_asym, three)


# ---------------------------------------------------------------------------
# partitions and embedding suites


def partitions(labels):
    """All set partitions of the labels, classes and parts in stable
    order."""
    labels = tuple(labels)
    if not labels:
        return [()]
    head, rest = labels[0], labels[1:]
    out = []
    for part in partitions(rest):
        part = [list(c) for c in part]
        for i in range(len(part)):
            grown = [list(c) for c in part]
            grown[i].insert(0, head)
            out.append(tuple(tuple(c) for c in grown))
        out.append(tuple([(head,)] + [tuple(c) for c in part]))
    return out


def full_subcategory(cat, sublabels):
    """The full substructure on a subset of points, with its inclusion."""
    th = cat.theory
    S = Carrier(sublabels)
    TS = th.t(S)
    big = cat.structure
    rows = tuple(
        tuple(big.get(ts, x) for x in S.labels) for ts in TS.labels
    )
    sub = TCategory(th, S, VRel(th.quantale, TS, S, rows))
    incl = TFunctorMap.from_labels(sub, cat, lambda x: x)
    return sub, incl


def all_functors(dom, cod):
    out = []
    n = len(cod.carrier)
    for combo in itertools.product(range(n), repeat=len(dom.carrier)):
        f = TFunctorMap(dom, cod, combo)
        if is_functor(f):
            out.append(f)
    return out


@lru_cache(maxsize=None)
def _embedding_codomains(theory, max_size):
    cats = []
    for k in range(1, max_size + 1):
        cats.extend(all_categories(theory, _labels(k)))
    return canonical_forms(cats)


def injectivity_suite(cat, max_size):
    """Every full-subcategory inclusion of every category on at most
    max_size points (one per isomorphism class), paired with every map of
    the subcategory into ``cat``."""
    embeddings, maps = [], []
    for codomain in _embedding_codomains(cat.theory, max_size):
        labs = codomain.carrier.labels
        for r in range(1, len(labs)):
            for sub_labels in itertools.combinations(labs, r):
                sub, incl = full_subcategory(codomain, sub_labels)
                for f in all_functors(sub, cat):
                    embeddings.append(incl)
                    maps.append(f)
    return embeddings, maps


# ---------------------------------------------------------------------------
# word-theory samples


def random_trel(theory, X, Y, rng):
    q = theory.quantale
    elems = q.elements()
    TX = theory.t(X)
    rows = tuple(
        tuple(rng.choice(elems) for _ in Y.labels) for _ in TX.labels
    )
    return TRel(theory, X, VRel(q, TX, Y, rows))


def unitary_closure(alpha):
    """Absorb the codomain unit; by associativity the result is unitary."""
    closed = kleisli(unit_op(alpha.theory, alpha.cod), alpha)
    return closed if unitary(closed) else None


def sample_unitary_trels(theory, X, Y, count, seed):
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count and tries < count * 20:
        tries += 1
        cand = unitary_closure(random_trel(theory, X, Y, rng))
        if cand is not None and cand.rel not in [c.rel for c in out]:
            out.append(cand)
    return out
