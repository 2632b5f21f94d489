"""Exact arithmetic over real quadratic fields, planar points, and point sets.

Values are represented as a + b*sqrt(d) with rational a, b and squarefree
d >= 1.  All predicates (signs, comparisons, membership) are decided
exactly; floating output is derived from dyadic approximations that carry
explicit error bounds.  Sums mixing several radicals (as arise in squared
distances between points whose coordinates live in different fields) are
handled by :class:`RadicalSum`.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Iterator, Optional, Sequence, Union

Rational = Fraction

RationalLike = Union[int, Fraction]

#: Hard ceiling for precision escalation, in bits.  A comparison still
#: unresolved here is reported as numerically equal.
PRECISION_CAP = 4096

_ESCALATION_STEPS = (64, 128, 256, 512, 1024, 2048, PRECISION_CAP)


class FieldMismatchError(ValueError):
    """Arithmetic attempted between two distinct nontrivial quadratic fields."""


class ParseError(ValueError):
    """A textual exact-number or point row could not be parsed."""


def as_fraction(x: Union[int, float, str, Fraction]) -> Fraction:
    """Coerce to an exact rational; floats are read as their decimal literal."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


@lru_cache(maxsize=None)
def squarefree_split(n: int) -> tuple[int, int]:
    """Split ``n = f*f*m`` with m squarefree; returns ``(f, m)``.

    Trial division; intended for the small radicands that occur as field
    discriminants, not for cryptographic-size inputs.
    """
    if n <= 0:
        raise ValueError("radicand must be positive")
    f, m = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            f *= p ** (e // 2)
            if e % 2:
                m *= p
        p += 1 if p == 2 else 2
    m *= n
    return f, m


@lru_cache(maxsize=None)
def _prime_factors(d: int) -> tuple[int, ...]:
    """Prime factors of a squarefree d > 1, ascending."""
    out = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            out.append(p)
            d //= p
        p += 1 if p == 2 else 2
    if d > 1:
        out.append(d)
    return tuple(out)


@lru_cache(maxsize=4096)
def _isqrt_shifted(d: int, bits: int) -> int:
    return isqrt(d << (2 * bits))


def sqrt_bounds(d: int, bits: int) -> tuple[Fraction, Fraction]:
    """Dyadic midpoint and half-width bracketing sqrt(d) within 2**-(bits+1)."""
    s = _isqrt_shifted(d, bits)
    scale = 1 << (bits + 1)
    return Fraction(2 * s + 1, scale), Fraction(1, scale)


class QuadExt:
    """Immutable element a + b*sqrt(d) of a real quadratic field.

    d is kept squarefree (square parts are folded into b at construction)
    and a pure rational is always stored with d = 1, b = 0, so equality is
    componentwise.  Arithmetic requires compatible fields: rationals embed
    into any Q(sqrt(d)), but mixing two distinct nontrivial radicals raises
    :class:`FieldMismatchError`.
    """

    __slots__ = ("a", "b", "d")

    a: Fraction
    b: Fraction
    d: int

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, d: int = 1):
        a = Fraction(a)
        b = Fraction(b)
        if not isinstance(d, int):
            raise TypeError("radicand must be an integer")
        if d < 1:
            raise ValueError("radicand must be >= 1")
        if d > 1:
            f, m = squarefree_split(d)
            b *= f
            d = m
        if d == 1:
            a += b
            b = Fraction(0)
        elif b == 0:
            d = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("QuadExt is immutable")

    # -- basic protocol ------------------------------------------------

    def __repr__(self) -> str:
        return f"QuadExt({self.a!r}, {self.b!r}, {self.d})"

    def __str__(self) -> str:
        return format_quadext(self)

    def __eq__(self, other) -> bool:
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    # -- field plumbing ------------------------------------------------

    def _common_d(self, other: "QuadExt") -> int:
        if self.d == other.d:
            return self.d
        if self.d == 1:
            return other.d
        if other.d == 1:
            return self.d
        raise FieldMismatchError(
            f"cannot combine sqrt({self.d}) with sqrt({other.d})"
        )

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    # -- ring operations -----------------------------------------------

    def __add__(self, other) -> "QuadExt":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._common_d(other)
        return QuadExt(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __sub__(self, other) -> "QuadExt":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._common_d(other)
        return QuadExt(self.a - other.a, self.b - other.b, d)

    def __rsub__(self, other) -> "QuadExt":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.a, -self.b, self.d)

    def __mul__(self, other) -> "QuadExt":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._common_d(other)
        return QuadExt(
            self.a * other.a + self.b * other.b * d,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm a*a - b*b*d (rational)."""
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero quadratic element")
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other) -> "QuadExt":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._common_d(other)  # raises on genuine mismatch
        del d
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QuadExt":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    # -- exact predicates ------------------------------------------------

    def sign(self) -> int:
        """Exact sign in {-1, 0, 1}; never touches floating point."""
        return quad_sign(self)

    def compare(self, other) -> int:
        """Exact three-way value comparison; works across distinct fields."""
        other = _lift(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare QuadExt with {type(other)}")
        if self.d == other.d or self.d == 1 or other.d == 1:
            return (self - other).sign()
        return RadicalSum.of(self, -other).sign()

    def __lt__(self, other) -> bool:
        return self.compare(other) < 0

    def __le__(self, other) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other) -> bool:
        return self.compare(other) >= 0

    def __abs__(self) -> "QuadExt":
        return -self if self.sign() < 0 else self

    def floor(self) -> int:
        """Exact integer floor."""
        if self.b == 0:
            return self.a.numerator // self.a.denominator
        mid, err = self.approx(64)
        m = (mid.numerator // mid.denominator) if err < 1 else 0
        # mid is within err of the true value; walk to the exact floor.
        while (self - m).sign() < 0:
            m -= 1
        while (self - (m + 1)).sign() >= 0:
            m += 1
        return m

    # -- approximation ---------------------------------------------------

    def approx(self, precision_bits: int = 53) -> tuple[Fraction, Fraction]:
        """Dyadic midpoint and rigorous absolute error bound.

        The bound satisfies err <= 2**(1 - precision_bits) * (1 + |value|)
        regardless of the size of b.
        """
        if precision_bits < 24:
            raise ValueError("precision_bits must be >= 24")
        if self.b == 0:
            return self.a, Fraction(0)
        babs = abs(self.b)
        extra = max(0, babs.numerator.bit_length() - babs.denominator.bit_length() + 1)
        bits = precision_bits + 8 + extra
        mid_s, err_s = sqrt_bounds(self.d, bits)
        return self.a + self.b * mid_s, babs * err_s

    def to_float(self, precision_bits: int = 53) -> tuple[float, float]:
        """Floating value with a conservative absolute error bound."""
        mid, err = self.approx(precision_bits)
        value = float(mid)
        if err == 0 and Fraction(value) == mid:
            return value, 0.0
        # float(mid) is correctly rounded: one half-ulp of conversion error.
        conv = abs(value) * 2.0 ** -52 + 5e-324
        bound = float(err) * (1 + 2.0 ** -50) + conv
        return value, bound

    def __float__(self) -> float:
        return self.to_float()[0]


def _lift(x) -> Union[QuadExt, type(NotImplemented)]:
    if isinstance(x, QuadExt):
        return x
    if isinstance(x, (int, Fraction)):
        return QuadExt(x)
    return NotImplemented


def quad_add(u: QuadExt, v: QuadExt) -> QuadExt:
    """Componentwise sum; fields must agree (rationals embed)."""
    return u + v


def quad_mul(u: QuadExt, v: QuadExt) -> QuadExt:
    """Product (a1*a2 + b1*b2*d, a1*b2 + a2*b1); fields must agree."""
    return u * v


def quad_sign(u: QuadExt) -> int:
    """Exact sign of a + b*sqrt(d) by comparing a*a against b*b*d."""
    sa = (u.a > 0) - (u.a < 0)
    sb = (u.b > 0) - (u.b < 0)
    if sb == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # Opposite signs: |a| versus |b|*sqrt(d), squared.
    lhs = u.a * u.a
    rhs = u.b * u.b * u.d
    if lhs == rhs:
        # Impossible for d > 1 squarefree with a, b nonzero; kept for safety.
        return 0
    return sa if lhs > rhs else sb


def to_float(u: QuadExt, precision_bits: int = 53) -> tuple[float, float]:
    """Module-level alias for :meth:`QuadExt.to_float`."""
    return u.to_float(precision_bits)


# -- serialization -----------------------------------------------------------


def _format_fraction(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_quadext(u: QuadExt) -> str:
    """Canonical text form.

    Pure rationals print compactly ("2", "-1/2"); anything with a radical
    prints in the full two-part grammar with signs folded into numerators,
    e.g. "-1/1+1/1*sqrt(2)".
    """
    if u.b == 0:
        return _format_fraction(u.a)
    return (
        f"{u.a.numerator}/{u.a.denominator}"
        f"+{u.b.numerator}/{u.b.denominator}*sqrt({u.d})"
    )


_RAT = r"[+-]?\d+(?:/\d+)?"
_RE_RATIONAL = re.compile(rf"^({_RAT})$")
_RE_RADICAL = re.compile(rf"^(?:({_RAT})\*)?([+-]?)sqrt\((\d+)\)$")
_RE_FULL = re.compile(
    rf"^({_RAT})([+-])((?:[+-]?\d+(?:/\d+)?\*)?)sqrt\((\d+)\)$"
)


def _parse_rat(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {tok!r}") from exc


def parse_quadext(text: str) -> QuadExt:
    """Parse the exact-number grammar.

    Accepts the canonical full form ("a/b+c/d*sqrt(n)"), bare rationals
    ("3", "-1/2") and bare radicals ("sqrt(2)", "-3/4*sqrt(5)"), with
    unit parts omitted ("1+sqrt(2)").
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty exact-number token")
    m = _RE_RATIONAL.match(s)
    if m:
        return QuadExt(_parse_rat(m.group(1)))
    m = _RE_RADICAL.match(s)
    if m:
        coef = _parse_rat(m.group(1)) if m.group(1) else Fraction(1)
        if m.group(2) == "-":
            coef = -coef
        return QuadExt(0, coef, int(m.group(3)))
    m = _RE_FULL.match(s)
    if m:
        a = _parse_rat(m.group(1))
        btok = m.group(3)
        b = _parse_rat(btok[:-1]) if btok else Fraction(1)
        if m.group(2) == "-":
            b = -b
        return QuadExt(a, b, int(m.group(4)))
    raise ParseError(f"cannot parse exact number {text!r}")


# -- sums of several radicals -------------------------------------------------


class RadicalSum:
    """Finite sum of c_k * sqrt(d_k) with distinct squarefree d_k >= 1.

    Closed under ring operations (products reduce sqrt(d1)*sqrt(d2) to a
    single squarefree radical), with an exact zero test by linear
    independence of distinct squarefree radicals over Q.  Signs of nonzero
    values are decided by escalating dyadic intervals.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[dict[int, Fraction]] = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for d, c in terms.items():
                if c == 0:
                    continue
                if d == 1:
                    clean[1] = clean.get(1, Fraction(0)) + c
                else:
                    f, m = squarefree_split(d)
                    clean[m] = clean.get(m, Fraction(0)) + c * f
            clean = {d: c for d, c in clean.items() if c != 0}
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("RadicalSum is immutable")

    @classmethod
    def of(cls, *values: Union[QuadExt, Fraction, int]) -> "RadicalSum":
        terms: dict[int, Fraction] = {}
        for v in values:
            if isinstance(v, QuadExt):
                terms[1] = terms.get(1, Fraction(0)) + v.a
                if v.b:
                    terms[v.d] = terms.get(v.d, Fraction(0)) + v.b
            else:
                terms[1] = terms.get(1, Fraction(0)) + Fraction(v)
        return cls(terms)

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "RadicalSum(0)"
        bits = []
        for d in sorted(self._terms):
            c = self._terms[d]
            bits.append(str(c) if d == 1 else f"{c}*sqrt({d})")
        return f"RadicalSum({' + '.join(bits)})"

    def __eq__(self, other) -> bool:
        other = _lift_rs(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other) -> "RadicalSum":
        other = _lift_rs(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for d, c in other._terms.items():
            terms[d] = terms.get(d, Fraction(0)) + c
        return RadicalSum(terms)

    __radd__ = __add__

    def __neg__(self) -> "RadicalSum":
        return RadicalSum({d: -c for d, c in self._terms.items()})

    def __sub__(self, other) -> "RadicalSum":
        other = _lift_rs(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RadicalSum":
        other = _lift_rs(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "RadicalSum":
        other = _lift_rs(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[int, Fraction] = {}
        from math import gcd as _gcd

        for d1, c1 in self._terms.items():
            for d2, c2 in other._terms.items():
                g = _gcd(d1, d2)
                m = (d1 // g) * (d2 // g)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2 * g
        return RadicalSum(terms)

    __rmul__ = __mul__

    def inverse(self) -> "RadicalSum":
        """Exact inverse via the product of radical conjugates."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        primes: set[int] = set()
        for d in self._terms:
            primes.update(_prime_factors(d))
        primes_t = sorted(primes)
        if len(primes_t) > 6:
            raise ValueError("radical support too large to invert exactly")
        conj_product = RadicalSum({1: Fraction(1)})
        for mask in range(1, 1 << len(primes_t)):
            flipped = {
                d: (-c if _parity(d, primes_t, mask) else c)
                for d, c in self._terms.items()
            }
            conj_product = conj_product * RadicalSum(flipped)
        norm = self * conj_product
        if set(norm._terms) - {1}:
            raise ArithmeticError("conjugate norm did not collapse to a rational")
        n = norm._terms.get(1, Fraction(0))
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return conj_product * RadicalSum({1: 1 / n})

    def __truediv__(self, other) -> "RadicalSum":
        other = _lift_rs(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def approx(self, precision_bits: int = 53) -> tuple[Fraction, Fraction]:
        """Dyadic midpoint plus rigorous error bound for the sum."""
        mid = Fraction(0)
        err = Fraction(0)
        for d, c in self._terms.items():
            if d == 1:
                mid += c
                continue
            cabs = abs(c)
            extra = max(
                0, cabs.numerator.bit_length() - cabs.denominator.bit_length() + 1
            )
            m, e = sqrt_bounds(d, precision_bits + 8 + extra)
            mid += c * m
            err += cabs * e
        return mid, err

    def sign(self) -> int:
        """Exact sign; 0 means exactly zero, or unresolved at the 4096-bit
        cap, which is reported as numerically equal (documented: does not
        occur for the sets in scope)."""
        if not self._terms:
            return 0
        items = list(self._terms.items())
        if len(items) == 1:
            d, c = items[0]
            return (c > 0) - (c < 0)
        if len(items) == 2 and any(d == 1 for d, _ in items):
            rat = self._terms.get(1, Fraction(0))
            d, c = next((d, c) for d, c in items if d != 1)
            return quad_sign(QuadExt(rat, c, d))
        for bits in _ESCALATION_STEPS:
            mid, err = self.approx(bits)
            if mid > err:
                return 1
            if mid < -err:
                return -1
        return 0

    def to_quadext(self) -> QuadExt:
        """Convert back when at most one radical is present."""
        irr = [(d, c) for d, c in self._terms.items() if d != 1]
        if len(irr) > 1:
            raise ValueError("value does not lie in a single quadratic field")
        a = self._terms.get(1, Fraction(0))
        if not irr:
            return QuadExt(a)
        d, c = irr[0]
        return QuadExt(a, c, d)

    def to_float(self, precision_bits: int = 53) -> tuple[float, float]:
        mid, err = self.approx(precision_bits)
        value = float(mid)
        conv = abs(value) * 2.0 ** -52 + 5e-324
        return value, float(err) * (1 + 2.0 ** -50) + conv

    def __float__(self) -> float:
        return self.to_float()[0]


def _parity(d: int, primes: Sequence[int], mask: int) -> bool:
    flips = 0
    for i, p in enumerate(primes):
        if mask & (1 << i) and d % p == 0:
            flips ^= 1
    return bool(flips)


def _lift_rs(x) -> Union[RadicalSum, type(NotImplemented)]:
    if isinstance(x, RadicalSum):
        return x
    if isinstance(x, (QuadExt, int, Fraction)):
        return RadicalSum.of(x)
    return NotImplemented


def radical_sum_sign(terms: Iterable[Union[QuadExt, Fraction, int]]) -> int:
    """Exact sign of a sum of values drawn from several quadratic fields."""
    return RadicalSum.of(*terms).sign()


# -- planar points and point sets ---------------------------------------------


@dataclass(frozen=True)
class PlanarPoint:
    """A point with exact coordinates; x and y may live in different fields.

    The tag records provenance (which construction produced the point) and
    does not participate in equality.
    """

    x: QuadExt
    y: QuadExt
    tag: Optional[str] = field(default=None, compare=False)

    def __iter__(self):
        return iter((self.x, self.y))

    def negate(self) -> "PlanarPoint":
        return PlanarPoint(-self.x, -self.y, self.tag)

    def dist_sq(self, other: "PlanarPoint") -> RadicalSum:
        dx = self.x - other.x
        dy = self.y - other.y
        return RadicalSum.of(dx * dx, dy * dy)

    def norm_sq(self) -> RadicalSum:
        return RadicalSum.of(self.x * self.x, self.y * self.y)

    def to_floats(self) -> tuple[float, float]:
        return float(self.x), float(self.y)


def point(x, y, tag: Optional[str] = None) -> PlanarPoint:
    """Convenience constructor lifting ints/Fractions to QuadExt."""
    xq = x if isinstance(x, QuadExt) else QuadExt(x)
    yq = y if isinstance(y, QuadExt) else QuadExt(y)
    return PlanarPoint(xq, yq, tag)


def _coord_cmp(u: QuadExt, v: QuadExt) -> int:
    if u.a == v.a and u.b == v.b and u.d == v.d:
        return 0
    return u.compare(v)


def _point_cmp(p: PlanarPoint, q: PlanarPoint) -> int:
    c = _coord_cmp(p.x, q.x)
    if c:
        return c
    return _coord_cmp(p.y, q.y)


class PointSet:
    """Finite planar point set in canonical (lexicographic) order.

    Duplicate coordinates are merged (keeping the smallest tag), and the
    ambient coordinate fields (d_x, d_y) are derived from the data: at most
    one nontrivial radical may appear per coordinate axis.
    """

    __slots__ = ("points", "d_x", "d_y")

    points: tuple[PlanarPoint, ...]

    def __init__(self, points: Iterable[PlanarPoint]):
        pts = list(points)
        d_x = _ambient_d((p.x for p in pts), "x")
        d_y = _ambient_d((p.y for p in pts), "y")
        pts = _canonical_sort(pts)
        deduped: list[PlanarPoint] = []
        for p in pts:
            if deduped and _point_cmp(deduped[-1], p) == 0:
                prev = deduped[-1]
                if _tag_key(p.tag) < _tag_key(prev.tag):
                    deduped[-1] = p
                continue
            deduped.append(p)
        object.__setattr__(self, "points", tuple(deduped))
        object.__setattr__(self, "d_x", d_x)
        object.__setattr__(self, "d_y", d_y)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("PointSet is immutable")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[PlanarPoint]:
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        if len(self.points) != len(other.points):
            return False
        return all(
            _point_cmp(p, q) == 0 for p, q in zip(self.points, other.points)
        )

    def __hash__(self) -> int:
        return hash(tuple((p.x, p.y) for p in self.points))

    def __repr__(self) -> str:
        return f"PointSet({len(self.points)} points, d=({self.d_x},{self.d_y}))"

    def __contains__(self, pt: PlanarPoint) -> bool:
        lo, hi = 0, len(self.points)
        while lo < hi:
            mid = (lo + hi) // 2
            c = _point_cmp(self.points[mid], pt)
            if c == 0:
                return True
            if c < 0:
                lo = mid + 1
            else:
                hi = mid
        return False

    def negate(self) -> "PointSet":
        return PointSet(p.negate() for p in self.points)

    def coordinates(self) -> list[tuple[QuadExt, QuadExt]]:
        return [(p.x, p.y) for p in self.points]


def _tag_key(tag: Optional[str]) -> tuple[int, str]:
    return (1, "") if tag is None else (0, tag)


def _ambient_d(coords: Iterable[QuadExt], axis: str) -> int:
    ds = {c.d for c in coords if c.d != 1}
    if len(ds) > 1:
        raise FieldMismatchError(
            f"{axis}-coordinates mix radicals {sorted(ds)}"
        )
    return ds.pop() if ds else 1


def _canonical_sort(pts: list[PlanarPoint]) -> list[PlanarPoint]:
    if all(p.x.b == 0 and p.y.b == 0 for p in pts):
        if all(
            p.x.a.denominator == 1 and p.y.a.denominator == 1 for p in pts
        ):
            return sorted(
                pts, key=lambda p: (p.x.a.numerator, p.y.a.numerator)
            )
        return sorted(pts, key=lambda p: (p.x.a, p.y.a))
    import functools

    return sorted(pts, key=functools.cmp_to_key(_point_cmp))


# -- CSV round trip ------------------------------------------------------------

CSV_HEADER = ("x_exact", "y_exact", "x_float", "y_float", "tag")


def _float_repr(v: float) -> str:
    return format(v, ".12g")


def write_pointset_csv(ps: PointSet, fileobj) -> None:
    """Emit the canonical CSV form (header plus one row per point)."""
    w = csv.writer(fileobj, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in ps:
        w.writerow(
            (
                format_quadext(p.x),
                format_quadext(p.y),
                _float_repr(float(p.x)),
                _float_repr(float(p.y)),
                p.tag or "",
            )
        )


class CsvRowError(ParseError):
    """CSV rows that failed to parse, with 1-based line numbers."""

    def __init__(self, lines: list[int]):
        self.lines = lines
        super().__init__(f"unparseable point rows at lines {lines}")


def read_pointset_csv(fileobj) -> PointSet:
    reader = csv.reader(fileobj)
    pts: list[PlanarPoint] = []
    bad: list[int] = []
    for lineno, row in enumerate(reader, start=1):
        if not row or (lineno == 1 and row[0] == "x_exact"):
            continue
        try:
            if len(row) < 2:
                raise ParseError("too few columns")
            x = parse_quadext(row[0])
            y = parse_quadext(row[1])
            tag = row[4].strip() if len(row) >= 5 and row[4].strip() else None
            pts.append(PlanarPoint(x, y, tag))
        except (ParseError, ValueError):
            bad.append(lineno)
    if bad:
        raise CsvRowError(bad)
    return PointSet(pts)
