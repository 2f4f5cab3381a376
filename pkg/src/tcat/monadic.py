"""The presheaf construction as a lax-idempotent monad, its algebras,
proper quotients with their split forks, and the inhabited/dense theory.

The presheaf endofunctor with the Yoneda unit and precomposition-with-
lifted-Yoneda multiplication is of Kock-Zoberlein type: pushing the unit
forward lands below the unit of the presheaf category.  Its algebras are
exactly the separated cocomplete categories; the checkers here verify the
defining inequalities and laws on enumerable instances, the quotient
construction used for coequalizers of equivalence relations, and the
variant theory where colimits are indexed by inhabited weights only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cat import (
    TCategory,
    TFunctorMap,
    TModule,
    check_category,
    check_functor,
    compose_functors,
    compose_modules,
    costar,
    detect_adjoint,
    equivalent,
    functor_leq,
    functor_order,
    generator_cat,
    identity_functor,
    identity_module,
    is_functor,
    l_separated,
    mult_smear,
    star,
    Order,
    _star_rel,
)
from .errors import CapabilityError, CarrierMismatchError, NotAFunctorError
from .presheaf import (
    Hat,
    enumerate_modules,
    f_hat,
    f_inv,
    f_pull_vector,
    f_push_vector,
    hat,
    hat_sup,
    mate,
    weighted_colim,
    yoneda,
    _extension_exists,
)
from .theory import TRel, kleisli_extend
from .vrel import Carrier, VRel


# ---------------------------------------------------------------------------
# the monad


@dataclass(frozen=True)
class KzReport:
    law_ok: bool
    mult_right_adjoint_ok: bool
    unit_law_yoneda: bool
    unit_law_push: bool

    @property
    def ok(self):
        return (
            self.law_ok
            and self.mult_right_adjoint_ok
            and self.unit_law_yoneda
            and self.unit_law_push
        )


def kz_check(cat: TCategory) -> KzReport:
    """Lax idempotency on one object: the pushed-forward Yoneda map lies
    below the Yoneda map of the presheaf category, the multiplication
    (precomposition with lifted Yoneda) is left adjoint to the latter, and
    both monad unit laws hold on the nose."""
    h = hat(cat)
    y = yoneda(cat)
    pushed = f_hat(y)
    y_h = yoneda(h.cat)
    law_ok = functor_order(pushed, y_h) in (Order.LE, Order.EQUIVALENT)

    mu = f_inv(y)
    unit_ok = functor_leq(identity_functor(mu.dom), compose_functors(mu, y_h))
    counit_ok = functor_leq(compose_functors(y_h, mu), identity_functor(h.cat))

    id_hat = tuple(range(len(h.cat.carrier)))
    unit_law_yoneda = compose_functors(y_h, mu).mapping == id_hat
    unit_law_push = compose_functors(pushed, mu).mapping == id_hat
    return KzReport(law_ok, unit_ok and counit_ok, unit_law_yoneda, unit_law_push)


def algebra_check(h: TFunctorMap) -> bool:
    """Structure maps for the presheaf monad: h must retract the Yoneda map
    on the nose and be left adjoint to it.  The carrier must be separated."""
    x = h.cod
    hx = hat(x)
    if h.dom != hx.cat:
        raise CarrierMismatchError("candidate must start at the presheaf category")
    if not l_separated(x):
        raise CapabilityError("algebra carriers must be separated")
    if not is_functor(h):
        raise NotAFunctorError("candidate structure map does not preserve structure")
    y = yoneda(x)
    if compose_functors(y, h).mapping != tuple(range(len(x.carrier))):
        return False
    unit_ok = functor_leq(identity_functor(hx.cat), compose_functors(h, y))
    counit_ok = functor_leq(compose_functors(y, h), identity_functor(x))
    return unit_ok and counit_ok


# ---------------------------------------------------------------------------
# equivalence relations, quotients, the split fork


@dataclass(frozen=True)
class EquivalenceRelation:
    base: TCategory
    classes: tuple  # tuple of tuples of labels, each inner tuple nonempty

    def __post_init__(self):
        seen = set()
        for cls in self.classes:
            if not cls:
                raise CarrierMismatchError("empty class in partition")
            for lab in cls:
                if lab in seen or lab not in self.base.carrier:
                    raise CarrierMismatchError("classes must partition the carrier")
                seen.add(lab)
        if len(seen) != len(self.base.carrier):
            raise CarrierMismatchError("classes must cover the carrier")

    def class_index(self, label):
        for ci, cls in enumerate(self.classes):
            if label in cls:
                return ci
        raise CarrierMismatchError(f"label {label!r} not classified")

    def pairs(self):
        order = {lab: i for i, lab in enumerate(self.base.carrier.labels)}
        out = []
        for x in self.base.carrier.labels:
            for y in self.base.carrier.labels:
                if self.class_index(x) == self.class_index(y):
                    out.append((x, y))
        out.sort(key=lambda p: (order[p[0]], order[p[1]]))
        return tuple(out)


def relation_cat(rel: EquivalenceRelation):
    """The relation as a full subobject of the tensor square, with its two
    projections."""
    base = rel.base
    th, q = base.theory, base.quantale
    pairs = Carrier(rel.pairs())
    tp = th.t(pairs)
    p1 = th.t_fn(lambda p: p[0])
    p2 = th.t_fn(lambda p: p[1])
    a = base.structure
    tx_index = a.dom.index
    rows = tuple(
        tuple(
            q.tensor(
                a.entries[tx_index(p1(w))][base.carrier.index(x)],
                a.entries[tx_index(p2(w))][base.carrier.index(y)],
            )
            for (x, y) in pairs.labels
        )
        for w in tp.labels
    )
    rcat = TCategory(th, pairs, VRel(q, tp, pairs, rows))
    pi1 = TFunctorMap.from_labels(rcat, base, lambda p: p[0])
    pi2 = TFunctorMap.from_labels(rcat, base, lambda p: p[1])
    return rcat, pi1, pi2


def kernel_pairs(rel: EquivalenceRelation):
    """The induced relation on T(base): exactly the projection images of
    T(relation)."""
    base = rel.base
    th = base.theory
    rcat, pi1, pi2 = relation_cat(rel)
    tr = th.t(rcat.carrier)
    p1 = th.t_fn(lambda p: p[0])
    p2 = th.t_fn(lambda p: p[1])
    return {(p1(w), p2(w)) for w in tr.labels}


@dataclass(frozen=True)
class QuotientResult:
    quotient: TCategory
    projection: TFunctorMap
    proper: bool
    proper_witness: object
    projections_adjoint: bool
    axioms: object

    @property
    def ok(self):
        return self.proper and self.axioms.ok


def proper_quotient(rel: EquivalenceRelation) -> QuotientResult:
    """Quotient by the partition: the structure on the classes is the join
    of the structure over all representatives.  Properness (the quotient
    map commutes with the structures on the nose) is recorded, along with
    whether the relation's projections are left adjoint, which is the
    hypothesis under which properness is guaranteed."""
    base = rel.base
    th, q = base.theory, base.quantale
    a = base.structure
    TX = a.dom
    qcar = Carrier(rel.classes)
    q_map = tuple(rel.class_index(x) for x in base.carrier.labels)
    tq_fn = th.t_fn(lambda x: rel.classes[rel.class_index(x)])
    TQ = th.t(qcar)
    tq_idx = tuple(TQ.index(tq_fn(tx)) for tx in TX.labels)

    bot = q.bottom
    cells = [[[] for _ in range(len(qcar))] for _ in range(len(TQ))]
    for ti in range(len(TX)):
        row = a.entries[ti]
        for xi in range(len(base.carrier)):
            cells[tq_idx[ti]][q_map[xi]].append(row[xi])
    rows = tuple(
        tuple(q.join(cells[tj][yj]) for yj in range(len(qcar)))
        for tj in range(len(TQ))
    )
    qcat = TCategory(th, qcar, VRel(q, TQ, qcar, rows))
    qf = TFunctorMap(base, qcat, q_map)

    proper, witness = True, None
    for ti in range(len(TX)):
        for yj in range(len(qcar)):
            via_q = rows[tq_idx[ti]][yj]
            direct = q.join(
                a.entries[ti][xi]
                for xi in range(len(base.carrier))
                if q_map[xi] == yj
            )
            if via_q != direct:
                proper, witness = False, (TX.labels[ti], qcar.labels[yj])
                break
        if not proper:
            break

    _, pi1, pi2 = relation_cat(rel)
    adj = detect_adjoint(pi2) is not None
    axioms = check_category(th, qcar, qcat.structure)
    return QuotientResult(qcat, qf, proper, witness, adj, axioms)


@dataclass(frozen=True)
class SplitForkReport:
    fork_equal: bool
    ge_ok: bool
    le_ok: bool
    formula_agree: bool
    split_laws: bool
    sup_q_functor: bool
    sup_q_left_inverse: bool
    sup_square: bool
    quotient: QuotientResult

    @property
    def ok(self):
        return (
            self.fork_equal
            and self.formula_agree
            and self.split_laws
            and self.sup_q_functor
            and self.sup_q_left_inverse
            and self.sup_square
            and self.quotient.ok
        )


def split_fork_check(rel: EquivalenceRelation, sup_x: TFunctorMap) -> SplitForkReport:
    """For a separated cocomplete base with adjoint projections: the two
    composites from presheaves-on-base to itself (through the quotient and
    through the relation) agree, the splittings retract, and the induced
    join map on the quotient closes the square with the base join map."""
    base = rel.base
    if not l_separated(base):
        raise CapabilityError("split fork needs a separated base")
    qres = proper_quotient(rel)
    if not qres.projections_adjoint:
        raise CapabilityError("split fork needs left adjoint projections")
    rcat, pi1, pi2 = relation_cat(rel)
    qf = qres.projection

    hx = hat(base)
    lhs = compose_functors(f_hat(qf), f_inv(qf))
    rhs = compose_functors(f_inv(pi1), f_hat(pi2))
    fork_equal = lhs.mapping == rhs.mapping
    ge_ok = functor_leq(rhs, lhs)
    le_ok = functor_leq(lhs, rhs)

    # elementwise join formulas for both composites
    th, q = base.theory, base.quantale
    TX = base.structure.dom
    smear = mult_smear(base)
    related = kernel_pairs(rel)
    t = len(TX)
    idx = TX.index
    formula_agree = True
    for vi, vec in enumerate(hx.vectors):
        lhs_vec = hx.vectors[lhs.mapping[vi]]
        rhs_vec = hx.vectors[rhs.mapping[vi]]
        for ti in range(t):
            l_terms = []
            r_terms = []
            for (u, w) in related:
                ui, wi = idx(u), idx(w)
                l_terms.append(q.tensor(vec[wi], smear.entries[ti][ui]))
                r_terms.append(q.tensor(vec[ui], smear.entries[ti][wi]))
            if q.join(l_terms) != lhs_vec[ti] or q.join(r_terms) != rhs_vec[ti]:
                formula_agree = False
                break
        if not formula_agree:
            break

    hq = hat(qres.quotient)
    id_hq = tuple(range(len(hq.cat.carrier)))
    hr = hat(rcat)
    id_hx = tuple(range(len(hx.cat.carrier)))
    split_laws = (
        compose_functors(f_inv(qf), f_hat(qf)).mapping == id_hq
        and compose_functors(f_inv(pi1), f_hat(pi1)).mapping == id_hx
    )

    # induced join map on the quotient: pull back, join, project
    sup_q_mapping = tuple(
        qf.mapping[sup_x.mapping[hx.index[f_pull_vector(qf, chi)]]]
        for chi in hq.vectors
    )
    sup_q = TFunctorMap(hq.cat, qres.quotient, sup_q_mapping)
    sup_q_functor = is_functor(sup_q)
    y_q = yoneda(qres.quotient)
    sup_q_left_inverse = compose_functors(y_q, sup_q).mapping == tuple(
        range(len(qres.quotient.carrier))
    )
    sup_square = (
        compose_functors(f_hat(qf), sup_q).mapping
        == compose_functors(sup_x, qf).mapping
    )
    return SplitForkReport(
        fork_equal,
        ge_ok,
        le_ok,
        formula_agree,
        split_laws,
        sup_q_functor,
        sup_q_left_inverse,
        sup_square,
        qres,
    )


# ---------------------------------------------------------------------------
# inhabited modules and dense maps


@dataclass(frozen=True)
class InhabitedWitness:
    verdict: bool
    witnesses: tuple  # (target label, best source label or None) per target


def inhabited_check(phi: TModule) -> InhabitedWitness:
    """A module is inhabited when every target point carries at least unit
    total weight; records one best source witness per target."""
    q = phi.dom.quantale
    rel = phi.rel.rel
    witnesses = []
    verdict = True
    for j, y in enumerate(phi.cod.carrier.labels):
        col = tuple(rel.entries[i][j] for i in range(len(rel.dom)))
        total = q.join(col)
        best = None
        for i, v in enumerate(col):
            if v == total:
                best = rel.dom.labels[i]
                break
        witnesses.append((y, best))
        if not q.leq(q.unit, total):
            verdict = False
    return InhabitedWitness(verdict, tuple(witnesses))


def dense_check(f: TFunctorMap) -> bool:
    return inhabited_check(star(f)).verdict


def vector_inhabited(quantale, vec) -> bool:
    return quantale.leq(quantale.unit, quantale.join(vec))


# ---------------------------------------------------------------------------
# the inhabited-presheaf subcategory


class XPlus:
    __slots__ = ("base", "cat", "vectors", "index", "inclusion", "unit")

    def __init__(self, base, cat, vectors, inclusion, unit):
        self.base = base
        self.cat = cat
        self.vectors = vectors
        self.index = {v: i for i, v in enumerate(vectors)}
        self.inclusion = inclusion
        self.unit = unit


def x_plus(cat: TCategory) -> XPlus:
    """Inhabited presheaves with structure restricted from the full
    presheaf category; comes with the inclusion and the corestricted
    Yoneda map."""
    h = hat(cat)
    q = cat.quantale
    keep = [i for i, v in enumerate(h.vectors) if vector_inhabited(q, v)]
    vectors = tuple(h.vectors[i] for i in keep)
    carrier = Carrier(vectors)
    th = cat.theory
    tp = th.t(carrier)
    big = h.cat.structure
    big_dom_index = big.dom.index
    rows = tuple(
        tuple(big.entries[big_dom_index(p)][keep[j]] for j in range(len(keep)))
        for p in tp.labels
    )
    plus_cat = TCategory(th, carrier, VRel(q, tp, carrier, rows))
    inclusion = TFunctorMap(plus_cat, h.cat, tuple(keep))
    y = yoneda(cat)
    unit = TFunctorMap(
        cat,
        plus_cat,
        tuple(carrier.index(h.vectors[y.mapping[i]]) for i in range(len(cat.carrier))),
    )
    return XPlus(cat, plus_cat, vectors, inclusion, unit)


def f_plus(f: TFunctorMap, px: XPlus = None, py: XPlus = None) -> TFunctorMap:
    """Restriction of the pushforward to inhabited presheaves."""
    if px is None:
        px = x_plus(f.dom)
    if py is None:
        py = x_plus(f.cod)
    mapping = []
    for v in px.vectors:
        out = f_push_vector(f, v)
        if out not in py.index:
            raise CarrierMismatchError("pushforward left the inhabited part")
        mapping.append(py.index[out])
    return TFunctorMap(px.cat, py.cat, tuple(mapping))


def enumerate_inhabited_modules(dom: TCategory, cod: TCategory):
    return [
        m for m in enumerate_modules(dom, cod) if inhabited_check(m).verdict
    ]


def plus_closed_check(cat: TCategory, weight_objects=()) -> bool:
    """Inhabited colimits of inhabited presheaves stay inhabited: the
    colimit in the presheaf category of the inclusion, weighted by any
    inhabited module out of the inhabited part, lands in the inhabited
    part again."""
    px = x_plus(cat)
    h = hat(cat)
    objs = list(weight_objects) or [generator_cat(cat.theory)]
    sup_hat = hat_sup(cat)
    for z in objs:
        for phi in enumerate_inhabited_modules(px.cat, z):
            composite = compose_modules(phi, costar(px.inclusion))
            colim = compose_functors(mate(composite, hat(h.cat)), sup_hat)
            # the computed map is the weighted colimit of the inclusion
            expected = kleisli_extend(_star_rel(px.inclusion), phi.rel)
            assert _star_rel(colim).rel == expected.rel
            for zi in range(len(z.carrier)):
                if not vector_inhabited(
                    cat.quantale, h.vectors[colim.mapping[zi]]
                ):
                    return False
    return True


@dataclass(frozen=True)
class DenselyInjectiveReport:
    left_inverse: object
    left_adjoint: object
    inhabited_colimits_ok: object
    densely_injective: object
    checked: tuple
    agree: bool


def densely_injective_check(
    cat: TCategory, embedding_suite=None, weight_objects=()
) -> DenselyInjectiveReport:
    """Counterpart of the cocompleteness equivalences for inhabited
    weights and dense embeddings."""
    px = x_plus(cat)
    left_inv = _extension_exists(px.unit, identity_functor(cat))
    adj = detect_adjoint(px.unit)
    checked = ["left-inverse", "left-adjoint"]
    colimits_ok = None
    if weight_objects:
        checked.append("inhabited-colimits")
        colimits_ok = True
        one = identity_functor(cat)
        for z in weight_objects:
            for phi in enumerate_inhabited_modules(cat, z):
                if weighted_colim(phi, one) is None:
                    colimits_ok = False
                    break
            if colimits_ok is False:
                break
    densely_inj = None
    if embedding_suite is not None:
        checked.append("densely-injective")
        embeddings, maps = embedding_suite
        densely_inj = True
        for emb, f in zip(embeddings, maps):
            rep = check_functor(emb)
            if not (rep.functor and rep.fully_faithful):
                raise NotAFunctorError("suite embedding is not fully faithful")
            if not dense_check(emb):
                continue
            if f.cod != cat:
                raise CarrierMismatchError("suite map must land in the category")
            if _extension_exists(emb, f) is None:
                densely_inj = False
                break
    verdicts = [left_inv is not None, adj is not None]
    if colimits_ok is not None:
        verdicts.append(colimits_ok)
    if densely_inj is not None:
        verdicts.append(densely_inj)
    return DenselyInjectiveReport(
        left_inv,
        adj,
        colimits_ok,
        densely_inj,
        tuple(checked),
        len(set(verdicts)) == 1,
    )
