"""Commutative quantales over three concrete carriers.

A quantale (V, *, k) is a complete lattice with a commutative monoid
structure whose multiplication distributes over arbitrary joins, including
the empty one.  Shipped carriers:

* ``Bool2``        -- {false, true} with conjunction; the truth quantale.
* ``FiniteChain``  -- {0, .., n-1} with min; every law is exactly decidable.
* ``Lawvere``      -- extended nonnegative rationals under +, ordered
                      opposite to the numeric order (smaller distance =
                      larger truth value).  Values are exact: ``Fraction``
                      or the ``INF`` singleton, never floats.

Scalars are plain immutable Python values; all arithmetic goes through the
owning quantale object, which validates membership.  ``hom`` is the
residual of the tensor: the largest w with w * u <= v.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapabilityError, SpecMismatchError


class _Infinity:
    """The infinite distance.  Opaque singleton; only Lawvere methods
    interpret it."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INF = _Infinity()


class Quantale:
    """Shared surface of the three carriers."""

    name = "?"

    # -- carrier -----------------------------------------------------------
    def check(self, v):
        """Return v, raising SpecMismatchError if it is not a carrier
        element."""
        raise NotImplementedError

    @property
    def enumerable(self):
        return False

    def elements(self):
        raise CapabilityError(f"carrier of {self.name} is not enumerable")

    # -- structure ---------------------------------------------------------
    def tensor(self, u, v):
        raise NotImplementedError

    def join(self, vs):
        raise NotImplementedError

    def meet(self, vs):
        raise NotImplementedError

    def hom(self, u, v):
        raise NotImplementedError

    def leq(self, u, v):
        raise NotImplementedError

    @property
    def bottom(self):
        raise NotImplementedError

    @property
    def top(self):
        raise NotImplementedError

    @property
    def unit(self):
        raise NotImplementedError

    # -- i/o -----------------------------------------------------------------
    def format(self, v):
        return repr(v)

    def to_json(self, v):
        raise NotImplementedError

    def from_json(self, obj):
        raise NotImplementedError

    def spec_json(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Bool2(Quantale):
    name = "bool2"

    def check(self, v):
        if v is True or v is False:
            return v
        raise SpecMismatchError(f"{v!r} is not a bool2 value")

    @property
    def enumerable(self):
        return True

    def elements(self):
        return (False, True)

    def tensor(self, u, v):
        return self.check(u) and self.check(v)

    def join(self, vs):
        acc = False
        for v in vs:
            acc = acc or self.check(v)
        return acc

    def meet(self, vs):
        acc = True
        for v in vs:
            acc = acc and self.check(v)
        return acc

    def hom(self, u, v):
        return (not self.check(u)) or self.check(v)

    def leq(self, u, v):
        return (not self.check(u)) or self.check(v)

    bottom = property(lambda self: False)
    top = property(lambda self: True)
    unit = property(lambda self: True)

    def format(self, v):
        return "true" if v else "false"

    def to_json(self, v):
        return self.check(v)

    def from_json(self, obj):
        if obj is True or obj is False:
            return obj
        raise SpecMismatchError(f"{obj!r} is not a bool2 scalar")

    def spec_json(self):
        return "bool2"


@dataclass(frozen=True)
class FiniteChain(Quantale):
    """Chain 0 < 1 < .. < n-1 with tensor = min and unit = top."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("chain needs at least one element")

    @property
    def name(self):
        return f"chain{self.n}"

    def check(self, v):
        if type(v) is int and 0 <= v < self.n:
            return v
        raise SpecMismatchError(f"{v!r} is not a chain{self.n} value")

    @property
    def enumerable(self):
        return True

    def elements(self):
        return tuple(range(self.n))

    def tensor(self, u, v):
        return min(self.check(u), self.check(v))

    def join(self, vs):
        acc = 0
        for v in vs:
            acc = max(acc, self.check(v))
        return acc

    def meet(self, vs):
        acc = self.n - 1
        for v in vs:
            acc = min(acc, self.check(v))
        return acc

    def hom(self, u, v):
        # largest w with min(w, u) <= v
        return self.n - 1 if self.check(u) <= self.check(v) else v

    def leq(self, u, v):
        return self.check(u) <= self.check(v)

    bottom = property(lambda self: 0)
    top = property(lambda self: self.n - 1)
    unit = property(lambda self: self.n - 1)

    def format(self, v):
        return str(v)

    def to_json(self, v):
        return self.check(v)

    def from_json(self, obj):
        if type(obj) is int:
            return self.check(obj)
        raise SpecMismatchError(f"{obj!r} is not a chain scalar")

    def spec_json(self):
        return {"chain": self.n}


@dataclass(frozen=True)
class Lawvere(Quantale):
    """Extended nonnegative rationals [0, inf] under +, with the order
    reversed: join = numeric infimum, bottom = inf, top = unit = 0."""

    name = "lawvere"

    def check(self, v):
        if v is INF:
            return v
        if type(v) is Fraction and v >= 0:
            return v
        raise SpecMismatchError(f"{v!r} is not an extended nonnegative rational")

    def tensor(self, u, v):
        self.check(u)
        self.check(v)
        if u is INF or v is INF:
            return INF
        return u + v

    def join(self, vs):
        # supremum in the reversed order = numeric infimum
        acc = INF
        for v in vs:
            self.check(v)
            if acc is INF or (v is not INF and v < acc):
                acc = v
        return acc

    def meet(self, vs):
        acc = Fraction(0)
        for v in vs:
            self.check(v)
            if v is INF:
                return INF
            if acc is not INF and v > acc:
                acc = v
        return acc

    def hom(self, u, v):
        # largest w (= numerically smallest) with w + u >= v: truncated
        # subtraction, with inf absorbing on the left argument
        self.check(u)
        self.check(v)
        if u is INF:
            return Fraction(0)
        if v is INF:
            return INF
        return v - u if v > u else Fraction(0)

    def leq(self, u, v):
        self.check(u)
        self.check(v)
        if u is INF:
            return True
        if v is INF:
            return False
        return u >= v

    bottom = property(lambda self: INF)
    top = property(lambda self: Fraction(0))
    unit = property(lambda self: Fraction(0))

    def format(self, v):
        if v is INF:
            return "inf"
        return str(v)

    def to_json(self, v):
        self.check(v)
        if v is INF:
            return "inf"
        if v.denominator == 1:
            return f"{v.numerator}"
        return f"{v.numerator}/{v.denominator}"

    def from_json(self, obj):
        if obj == "inf":
            return INF
        if type(obj) is int and obj >= 0:
            return Fraction(obj)
        if isinstance(obj, str):
            try:
                v = Fraction(obj)
            except (ValueError, ZeroDivisionError) as exc:
                raise SpecMismatchError(f"bad rational {obj!r}") from exc
            if v >= 0:
                return v
        raise SpecMismatchError(f"{obj!r} is not a lawvere scalar")

    def spec_json(self):
        return "lawvere"


def quantale_from_json(obj):
    if obj == "bool2":
        return Bool2()
    if obj == "lawvere":
        return Lawvere()
    if isinstance(obj, dict) and set(obj) == {"chain"} and type(obj["chain"]) is int:
        return FiniteChain(obj["chain"])
    raise SpecMismatchError(f"unknown quantale spec {obj!r}")
