"""Enriched categories for a theory: objects, maps, bimodules.

A category here is a carrier X with a reflexive, transitive structure
relation from T X to X.  Instances include ordered sets (identity theory
over bool2), Lawvere metric spaces (identity theory over the distance
quantale), and finite topological spaces (ultrafilter theory over bool2).

Structure-preserving maps, the pointwise order on them, bimodules with
their convolution calculus, adjoint detection by exhaustive search, and
the tensor/dual/free constructions all live here.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .errors import CapabilityError, CarrierMismatchError, NotAFunctorError
from .theory import IdentityTheory, Theory, TRel, kleisli, kleisli_extend, unit_op
from .vrel import Carrier, VRel, format_label


@dataclass(frozen=True)
class TCategory:
    theory: Theory
    carrier: Carrier
    structure: VRel  # T(carrier) -> carrier

    def __post_init__(self):
        if self.structure.dom != self.theory.t(self.carrier):
            raise CarrierMismatchError("structure rows must be indexed by T(carrier)")
        if self.structure.cod != self.carrier:
            raise CarrierMismatchError("structure columns must be indexed by carrier")
        if self.structure.quantale != self.theory.quantale:
            raise CarrierMismatchError("structure quantale differs from the theory's")

    @property
    def quantale(self):
        return self.theory.quantale

    def structure_trel(self):
        return TRel(self.theory, self.carrier, self.structure)


def discrete(theory, carrier):
    """Free category on a set: the transposed unit as structure."""
    return TCategory(theory, carrier, unit_op(theory, carrier).rel)


def generator_cat(theory):
    """The one-point free category; presheaves are indexed over it."""
    return discrete(theory, Carrier(("*",)))


def tensor_unit_cat(theory):
    """The one-point category with constant-unit structure."""
    point = Carrier(("*",))
    k = theory.quantale.unit
    return TCategory(
        theory, point, VRel.constant(theory.quantale, theory.t(point), point, k)
    )


def value_cat(theory):
    """The quantale itself as a category: structure (tv, v) is the residual
    from the collapsed bag tv into v."""
    q = theory.quantale
    carrier = Carrier(q.elements())
    fn = lambda tv, v: q.hom(theory.combine_values(theory.t_letters(tv)), v)
    return TCategory(theory, carrier, VRel.build(q, theory.t(carrier), carrier, fn))


@dataclass(frozen=True)
class CategoryReport:
    reflexive: bool
    reflexive_witness: object
    transitive: bool
    transitive_witness: object

    @property
    def ok(self):
        return self.reflexive and self.transitive

    def describe(self):
        bits = []
        if not self.reflexive:
            bits.append(f"reflexivity fails at {format_label(self.reflexive_witness)}")
        if not self.transitive:
            w = self.transitive_witness
            bits.append(
                "transitivity fails at ("
                + ", ".join(format_label(x) for x in w)
                + ")"
            )
        return "; ".join(bits) if bits else "ok"


def check_category(theory, carrier, structure) -> CategoryReport:
    """Both category axioms, with the first counterexample of each.

    Transitivity is checked over the support of the lifted structure, which
    keeps the bounded word theory tractable: candidates whose flattening
    would leave the bound are never generated.
    """
    cat = TCategory(theory, carrier, structure)
    q = theory.quantale
    a = cat.structure
    TX = a.dom
    unit_idx = theory.unit_map(carrier)

    refl_ok, refl_w = True, None
    for i, x in enumerate(carrier.labels):
        if not q.leq(q.unit, a.entries[unit_idx[i]][i]):
            refl_ok, refl_w = False, x
            break

    cap = getattr(theory, "bound", None)
    trans_ok, trans_w = True, None
    bot = q.bottom
    for j, x in enumerate(carrier.labels):
        if not trans_ok:
            break
        for ti, tx in enumerate(TX.labels):
            v1 = a.entries[ti][j]
            if v1 == bot:
                continue
            for big, v0 in theory.t_rel_support_dom(a, tx, flat_cap=cap):
                flat = theory.mult_label(big)
                if flat is None:
                    continue
                if not q.leq(q.tensor(v0, v1), a.entries[TX.index(flat)][j]):
                    trans_ok, trans_w = False, (big, tx, x)
                    break
            if not trans_ok:
                break
    return CategoryReport(refl_ok, refl_w, trans_ok, trans_w)


@dataclass(frozen=True)
class TFunctorMap:
    dom: TCategory
    cod: TCategory
    mapping: tuple  # cod indices, aligned with dom carrier order

    def __post_init__(self):
        if len(self.mapping) != len(self.dom.carrier):
            raise CarrierMismatchError("mapping does not cover the domain")
        if self.dom.theory != self.cod.theory:
            raise CarrierMismatchError("functor endpoints use different theories")
        for j in self.mapping:
            if not (0 <= j < len(self.cod.carrier)):
                raise CarrierMismatchError("mapping hits no codomain element")

    @staticmethod
    def from_labels(dom, cod, label_map):
        fn = label_map.__getitem__ if isinstance(label_map, dict) else label_map
        return TFunctorMap(
            dom, cod, tuple(cod.carrier.index(fn(x)) for x in dom.carrier.labels)
        )

    def __call__(self, label):
        return self.cod.carrier.labels[self.mapping[self.dom.carrier.index(label)]]

    def label_fn(self):
        dom, cod, mapping = self.dom.carrier, self.cod.carrier, self.mapping
        return lambda x: cod.labels[mapping[dom.index(x)]]

    def t_mapping(self):
        """The lifted map on T(dom) as indices into T(cod)."""
        return self.dom.theory.t_fn_indices(
            self.mapping, self.dom.carrier, self.cod.carrier
        )


def identity_functor(cat):
    return TFunctorMap(cat, cat, tuple(range(len(cat.carrier))))


def compose_functors(f, g):
    """Diagrammatic composite: f then g."""
    if f.cod != g.dom:
        raise CarrierMismatchError("functors do not compose")
    return TFunctorMap(f.dom, g.cod, tuple(g.mapping[j] for j in f.mapping))


@dataclass(frozen=True)
class FunctorReport:
    functor: bool
    functor_witness: object
    fully_faithful: bool
    ff_witness: object


def check_functor(f: TFunctorMap) -> FunctorReport:
    a, b = f.dom.structure, f.cod.structure
    q = f.dom.quantale
    tf = f.t_mapping()
    ok, okw, ff, ffw = True, None, True, None
    for ti in range(len(a.dom)):
        row_a = a.entries[ti]
        row_b = b.entries[tf[ti]]
        for i in range(len(a.cod)):
            lhs, rhs = row_a[i], row_b[f.mapping[i]]
            if ok and not q.leq(lhs, rhs):
                ok, okw = False, (a.dom.labels[ti], a.cod.labels[i])
            if ff and lhs != rhs:
                ff, ffw = False, (a.dom.labels[ti], a.cod.labels[i])
        if not ok and not ff:
            break
    return FunctorReport(ok, okw, ff and ok, ffw)


def is_functor(f):
    return check_functor(f).functor


class Order(enum.Enum):
    EQUIVALENT = "equivalent"
    LE = "le"
    GE = "ge"
    INCOMPARABLE = "incomparable"


def functor_leq(f, g):
    """Pointwise test: unit below cod-structure at (unit of f(x), g(x))."""
    if f.dom != g.dom or f.cod != g.cod:
        raise CarrierMismatchError("cannot order functors with different endpoints")
    b = f.cod.structure
    q = f.cod.quantale
    e = f.cod.theory.unit_map(f.cod.carrier)
    return all(
        q.leq(q.unit, b.entries[e[f.mapping[i]]][g.mapping[i]])
        for i in range(len(f.dom.carrier))
    )


def functor_order(f, g) -> Order:
    le, ge = functor_leq(f, g), functor_leq(g, f)
    if le and ge:
        return Order.EQUIVALENT
    if le:
        return Order.LE
    if ge:
        return Order.GE
    return Order.INCOMPARABLE


def equivalent(f, g):
    return functor_order(f, g) is Order.EQUIVALENT


def l_separated(cat) -> bool:
    """No two distinct points are equivalent as maps from the generator."""
    q = cat.quantale
    a = cat.structure
    e = cat.theory.unit_map(cat.carrier)
    n = len(cat.carrier)
    for i in range(n):
        for j in range(i + 1, n):
            if q.leq(q.unit, a.entries[e[i]][j]) and q.leq(q.unit, a.entries[e[j]][i]):
                return False
    return True


# ---------------------------------------------------------------------------
# bimodules


@dataclass(frozen=True)
class TModule:
    dom: TCategory
    cod: TCategory
    rel: TRel

    def __post_init__(self):
        if self.rel.dom != self.dom.carrier or self.rel.cod != self.cod.carrier:
            raise CarrierMismatchError("module matrix does not match its endpoints")
        if self.rel.theory != self.dom.theory or self.dom.theory != self.cod.theory:
            raise CarrierMismatchError("module endpoints use different theories")


def identity_module(cat):
    return TModule(cat, cat, cat.structure_trel())


def check_module(phi: TModule) -> bool:
    """Both actions absorb: phi after dom-structure and cod-structure after
    phi stay below phi."""
    a = phi.dom.structure_trel()
    b = phi.cod.structure_trel()
    right = kleisli(phi.rel, a)
    if not right.rel.leq(phi.rel.rel):
        return False
    left = kleisli(b, phi.rel)
    return left.rel.leq(phi.rel.rel)


def compose_modules(outer: TModule, inner: TModule) -> TModule:
    if inner.cod != outer.dom:
        raise CarrierMismatchError("modules do not compose")
    return TModule(inner.dom, outer.cod, kleisli(outer.rel, inner.rel))


def extend_modules(gamma: TModule, alpha: TModule) -> TModule:
    """Largest beta with (beta after alpha) below gamma."""
    if gamma.dom != alpha.dom:
        raise CarrierMismatchError("extension needs modules out of the same object")
    return TModule(alpha.cod, gamma.cod, kleisli_extend(gamma.rel, alpha.rel))


def adjoint_modules(left: TModule, right: TModule) -> bool:
    """left -| right: unit below right*left, left*right below counit."""
    if left.dom != right.cod or left.cod != right.dom:
        raise CarrierMismatchError("adjoint candidates must be opposed")
    unit_side = compose_modules(right, left)
    if not left.dom.structure.leq(unit_side.rel.rel):
        return False
    counit_side = compose_modules(left, right)
    return counit_side.rel.rel.leq(left.cod.structure)


def _star_rel(f: TFunctorMap) -> TRel:
    b = f.cod.structure
    tf = f.t_mapping()
    rows = tuple(b.entries[tf[ti]] for ti in range(len(f.dom.structure.dom)))
    return TRel(
        f.dom.theory,
        f.dom.carrier,
        VRel(f.dom.quantale, f.dom.structure.dom, f.cod.carrier, rows),
    )


def _costar_rel(f: TFunctorMap) -> TRel:
    b = f.cod.structure
    rows = tuple(
        tuple(b.entries[ti][f.mapping[i]] for i in range(len(f.dom.carrier)))
        for ti in range(len(b.dom))
    )
    return TRel(
        f.cod.theory,
        f.cod.carrier,
        VRel(f.cod.quantale, b.dom, f.dom.carrier, rows),
    )


def star(f: TFunctorMap) -> TModule:
    """The covariant module of a map; validates the map and the adjunction
    with its costar."""
    if not is_functor(f):
        raise NotAFunctorError("star needs a structure-preserving map")
    mod = TModule(f.dom, f.cod, _star_rel(f))
    co = TModule(f.cod, f.dom, _costar_rel(f))
    # unit law and the adjunction are theorems; keep them as live checks
    assert f.dom.structure.leq(compose_modules(co, mod).rel.rel)
    assert adjoint_modules(mod, co)
    return mod


def costar(f: TFunctorMap) -> TModule:
    if not is_functor(f):
        raise NotAFunctorError("costar needs a structure-preserving map")
    return TModule(f.cod, f.dom, _costar_rel(f))


def adj_module_lemma_check(phi: TModule, psi: TModule, alpha: TModule, beta: TModule) -> bool:
    """Right adjoints commute with extensions:
    alpha after (phi extended along psi) equals (alpha after phi) extended
    along psi.  Requires beta -| alpha, which is verified first."""
    if not adjoint_modules(beta, alpha):
        raise CarrierMismatchError("alpha is not right adjoint to the given beta")
    lhs = compose_modules(alpha, extend_modules(phi, psi))
    rhs = extend_modules(compose_modules(alpha, phi), psi)
    return lhs.rel.rel == rhs.rel.rel


def detect_adjoint(f: TFunctorMap):
    """Search all point mappings back for one whose costar equals the star
    of f; the first hit in carrier order is returned."""
    fstar = _star_rel(f).rel
    X, Y = f.dom, f.cod
    a = X.structure
    ty_count = len(fstar.dom)
    for cand in itertools.product(range(len(X.carrier)), repeat=len(Y.carrier)):
        ok = True
        for ti in range(ty_count):
            row = fstar.entries[ti]
            arow = a.entries[ti]
            for j in range(len(Y.carrier)):
                if row[j] != arow[cand[j]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            g = TFunctorMap(Y, X, cand)
            assert is_functor(g)
            return g
    return None


# ---------------------------------------------------------------------------
# constructions


def tensor_cat(xcat: TCategory, ycat: TCategory) -> TCategory:
    if xcat.theory != ycat.theory:
        raise CarrierMismatchError("tensor needs a common theory")
    th, q = xcat.theory, xcat.quantale
    pairs = Carrier(tuple(itertools.product(xcat.carrier.labels, ycat.carrier.labels)))
    tp = th.t(pairs)
    p1, p2 = th.t_fn(lambda p: p[0]), th.t_fn(lambda p: p[1])
    a, b = xcat.structure, ycat.structure
    tx_index = a.dom.index
    ty_index = b.dom.index
    rows = tuple(
        tuple(
            q.tensor(
                a.entries[tx_index(p1(w))][xcat.carrier.index(x)],
                b.entries[ty_index(p2(w))][ycat.carrier.index(y)],
            )
            for (x, y) in pairs.labels
        )
        for w in tp.labels
    )
    return TCategory(th, pairs, VRel(q, tp, pairs, rows))


def relabel(cat: TCategory, label_fn) -> TCategory:
    """Transport a category along a bijective relabelling.  Both T-carriers
    enumerate positionally, so structure entries transfer verbatim."""
    new_carrier = Carrier(tuple(label_fn(x) for x in cat.carrier.labels))
    th = cat.theory
    return TCategory(
        th,
        new_carrier,
        VRel(cat.quantale, th.t(new_carrier), new_carrier, cat.structure.entries),
    )


def underlying_v(cat: TCategory) -> TCategory:
    """Underlying plain enriched category: structure at (x, y) is the
    original structure at (unit of x, y)."""
    idth = IdentityTheory(cat.quantale)
    e = cat.theory.unit_map(cat.carrier)
    rows = tuple(cat.structure.entries[e[i]] for i in range(len(cat.carrier)))
    return TCategory(
        idth, cat.carrier, VRel(cat.quantale, cat.carrier, cat.carrier, rows)
    )


def free_t(vcat: TCategory, theory: Theory) -> TCategory:
    """Left adjoint to underlying_v: fatten a plain enriched category."""
    if not isinstance(vcat.theory, IdentityTheory):
        raise CarrierMismatchError("free_t starts from an identity-theory category")
    if vcat.quantale != theory.quantale:
        raise CarrierMismatchError("quantales differ")
    Z = vcat.carrier
    fn = lambda tz, z: theory.t_rel_entry(vcat.structure, tz, theory.unit_label(z))
    return TCategory(theory, Z, VRel.build(theory.quantale, theory.t(Z), Z, fn))


def em_free(theory: Theory, carrier: Carrier) -> TCategory:
    """The free algebra on a set, seen as a category: carrier T X with the
    graph of mult as structure (rows of bottom where mult is undefined)."""
    TX = theory.t(carrier)
    TTX = theory.t(TX)
    q = theory.quantale
    k, bot = q.unit, q.bottom
    rows = []
    for big in TTX.labels:
        flat = theory.mult_label(big)
        if flat is None:
            rows.append(tuple(bot for _ in TX.labels))
        else:
            fi = TX.index(flat)
            rows.append(tuple(k if j == fi else bot for j in range(len(TX))))
    return TCategory(theory, TX, VRel(q, TTX, TX, tuple(rows)))


def mult_smear(cat: TCategory) -> VRel:
    """The auxiliary matrix on T X: join over splittings of the lifted
    structure.  For the identity theory this is the structure itself."""
    th, q = cat.theory, cat.quantale
    TX = cat.structure.dom
    a = cat.structure
    rows = []
    for tx in TX.labels:
        acc = {ty: [] for ty in TX.labels}
        for big in th.mult_preimages(tx):
            for ty, v in th.t_rel_support_cod(a, big):
                acc[ty].append(v)
        rows.append(tuple(q.join(acc[ty]) for ty in TX.labels))
    return VRel(q, TX, TX, tuple(rows))


def m_cat(cat: TCategory) -> TCategory:
    """The auxiliary plain enriched category on T X."""
    idth = IdentityTheory(cat.quantale)
    return TCategory(idth, cat.structure.dom, mult_smear(cat))


def dual(cat: TCategory) -> TCategory:
    """Opposite category: fatten the transposed auxiliary category."""
    m = m_cat(cat)
    op = TCategory(m.theory, m.carrier, m.structure.involution())
    return free_t(op, cat.theory)


def char_tmod_check(xcat: TCategory, ycat: TCategory, psi: TRel) -> bool:
    """Bimodule laws hold iff the matrix is structure-preserving both as a
    map out of (free algebra x cod) and out of (dual x cod); returns whether
    the two verdicts agree."""
    th = xcat.theory
    if not th.quantale.enumerable:
        raise CapabilityError("the two-functor criterion enumerates the quantale")
    module_side = check_module(TModule(xcat, ycat, psi))

    vcat = value_cat(th)
    psi_fn = lambda p: psi.rel.get(p[0], p[1])

    em = tensor_cat(em_free(th, xcat.carrier), ycat)
    f1 = TFunctorMap.from_labels(em, vcat, psi_fn)
    side1 = is_functor(f1)

    dl = tensor_cat(dual(xcat), ycat)
    f2 = TFunctorMap.from_labels(dl, vcat, psi_fn)
    side2 = is_functor(f2)

    return module_side == (side1 and side2)
