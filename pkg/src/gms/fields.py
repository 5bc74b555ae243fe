"""Scalar fields: prime fields, rationals, Gaussian rationals and machine complex.

Elements are native Python values so matrix code can use ordinary operators:

* ``Fp:p``  -> ``int`` reduced to ``[0, p)``
* ``Q``     -> ``fractions.Fraction``
* ``Qi``    -> :class:`GaussianRational`
* ``C64``   -> ``complex``

Arithmetic results are passed through :meth:`Field.norm` to restore the
canonical representative (only prime fields need it).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


class FieldError(ValueError):
    """Raised for mixed field tags or values that do not belong to a field."""


class GaussianRational:
    """Exact a + b i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


@dataclass(frozen=True)
class Field:
    """A field tag. ``kind`` is one of ``"Fp"``, ``"Q"``, ``"Qi"``, ``"C64"``."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Fp", "Q", "Qi", "C64"):
            raise FieldError(f"unknown field kind {self.kind!r}")
        if self.kind == "Fp":
            if not (2 <= self.p < 2**31) or not _is_prime(self.p):
                raise FieldError(f"Fp needs a prime p < 2^31, got {self.p}")
        elif self.p:
            raise FieldError("only Fp carries a characteristic parameter")

    @property
    def tag(self) -> str:
        return f"Fp:{self.p}" if self.kind == "Fp" else self.kind

    def __str__(self):
        return self.tag

    @property
    def exact(self) -> bool:
        return self.kind != "C64"

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "Fp"

    @property
    def size(self) -> int | None:
        """Number of elements, or None for infinite fields."""
        return self.p if self.kind == "Fp" else None

    @property
    def zero(self):
        return {"Fp": 0, "Q": Fraction(0), "Qi": GaussianRational(0), "C64": 0j}[self.kind]

    @property
    def one(self):
        return {"Fp": 1, "Q": Fraction(1), "Qi": GaussianRational(1), "C64": 1 + 0j}[self.kind]

    def __call__(self, x):
        """Coerce an int, Fraction, Gaussian rational or complex into this field."""
        k = self.kind
        if k == "Fp":
            if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
                if isinstance(x, Rational):
                    x = Fraction(x)
                else:
                    raise FieldError(f"cannot coerce {x!r} into {self.tag}")
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise FieldError(f"{x} has no image in {self.tag}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return x % self.p
        if k == "Q":
            if isinstance(x, GaussianRational):
                if x.im:
                    raise FieldError(f"{x!r} is not rational")
                return x.re
            if isinstance(x, complex):
                raise FieldError("complex values are not rational")
            return Fraction(x)
        if k == "Qi":
            if isinstance(x, GaussianRational):
                return x
            if isinstance(x, complex):
                raise FieldError("machine complex cannot enter Q(i) implicitly")
            return GaussianRational(x)
        if isinstance(x, GaussianRational):
            return complex(x)
        return complex(x)

    def norm(self, x):
        """Canonical representative after native arithmetic."""
        if self.kind == "Fp":
            return x % self.p
        return x

    def inv(self, x):
        if self.kind == "Fp":
            if x % self.p == 0:
                raise ZeroDivisionError(f"zero has no inverse in {self.tag}")
            return pow(x, -1, self.p)
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.one / x

    def conj(self, x):
        if self.kind in ("Qi", "C64"):
            return x.conjugate()
        return x

    def is_zero(self, x, tol: float = 0.0) -> bool:
        if self.kind == "C64":
            return abs(x) <= tol
        return not x

    def elements(self):
        """All elements of a finite field in increasing order."""
        if self.kind != "Fp":
            raise FieldError(f"{self.tag} is infinite")
        return range(self.p)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def parse_field(spec: str | Field) -> Field:
    """Parse a tag such as ``"Fp:2"``, ``"Q"``, ``"Qi"`` or ``"C64"``."""
    if isinstance(spec, Field):
        return spec
    s = spec.strip()
    if s.startswith("Fp:"):
        try:
            p = int(s[3:])
        except ValueError as exc:
            raise FieldError(f"bad field tag {spec!r}") from exc
        return Field("Fp", p)
    if s in ("Q", "Qi", "C64"):
        return Field(s)
    raise FieldError(f"bad field tag {spec!r}")


def GF(p: int) -> Field:
    return Field("Fp", p)


QQ = Field("Q")
QQi = Field("Qi")
C64 = Field("C64")


def check_same(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldError(f"mixed field tags {first.tag} and {f.tag}")
    return first
