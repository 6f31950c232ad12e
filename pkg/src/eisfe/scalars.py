"""Exact scalars in Q, Q(i) and Q(i)(sqrt p).

Every symbolic value in the package has coefficients in the field
Q(i)(sqrt p) for a fixed prime p.  An element is stored as four rationals

    (a_re + a_im*i) + (b_re + b_im*i) * sqrt(p)

and carries p as a ring tag.  Mixing scalars with different tags raises
``RingMismatchError``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from sympy import isprime

__all__ = [
    "GaussRational",
    "QuadScalar",
    "RingMismatchError",
    "parse_fraction",
    "format_fraction",
    "qs_embed",
    "epsilon",
    "check_prime",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class RingMismatchError(ValueError):
    """Raised when scalars tagged with different primes are combined."""


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or p < 2 or not isprime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def parse_fraction(text) -> Fraction:
    """Parse ``"n/d"`` or ``"n"`` into a Fraction; floats are rejected."""
    if isinstance(text, float):
        raise TypeError("floating point values are not accepted")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    num, _, den = str(text).strip().partition("/")
    den = int(den) if den else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), den)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class GaussRational:
    """re + im*i with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        return GaussRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * other.inverse()

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if not isinstance(other, GaussRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"


class QuadScalar:
    """Element a + b*sqrt(p) of Q(i)(sqrt p), with a, b Gaussian rationals.

    Instances are immutable; equality is structural on the four reduced
    rational components plus the prime tag.
    """

    __slots__ = ("p", "ar", "ai", "br", "bi", "_hash")

    def __init__(self, p: int, ar=_ZERO, ai=_ZERO, br=_ZERO, bi=_ZERO):
        self.p = p
        self.ar = ar if type(ar) is Fraction else Fraction(ar)
        self.ai = ai if type(ai) is Fraction else Fraction(ai)
        self.br = br if type(br) is Fraction else Fraction(br)
        self.bi = bi if type(bi) is Fraction else Fraction(bi)
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_parts(cls, p: int, a: GaussRational, b: GaussRational | None = None):
        check_prime(p)
        b = b or GaussRational()
        return cls(p, a.re, a.im, b.re, b.im)

    @classmethod
    def rational(cls, p: int, r) -> "QuadScalar":
        return cls(p, Fraction(r))

    @classmethod
    def i(cls, p: int) -> "QuadScalar":
        return cls(p, _ZERO, _ONE)

    @classmethod
    def sqrt_p(cls, p: int) -> "QuadScalar":
        return cls(p, _ZERO, _ZERO, _ONE)

    # -- views ----------------------------------------------------------
    @property
    def a(self) -> GaussRational:
        return GaussRational(self.ar, self.ai)

    @property
    def b(self) -> GaussRational:
        return GaussRational(self.br, self.bi)

    def is_zero(self) -> bool:
        return not (self.ar or self.ai or self.br or self.bi)

    def is_rational(self) -> bool:
        return not (self.ai or self.br or self.bi)

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "QuadScalar":
        if isinstance(other, QuadScalar):
            if other.p != self.p:
                raise RingMismatchError(f"cannot combine scalars over p={self.p} and p={other.p}")
            return other
        if isinstance(other, (int, Rational)):
            return QuadScalar(self.p, Fraction(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar(self.p, self.ar + o.ar, self.ai + o.ai, self.br + o.br, self.bi + o.bi)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar(self.p, self.ar - o.ar, self.ai - o.ai, self.br - o.br, self.bi - o.bi)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return QuadScalar(self.p, -self.ar, -self.ai, -self.br, -self.bi)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        if self.is_rational():
            r = self.ar
            return QuadScalar(p, r * o.ar, r * o.ai, r * o.br, r * o.bi)
        if o.is_rational():
            r = o.ar
            return QuadScalar(p, r * self.ar, r * self.ai, r * self.br, r * self.bi)
        # (a + b w)(c + d w) = (ac + p bd) + (ad + bc) w,  w = sqrt(p)
        ar, ai, br, bi = self.ar, self.ai, self.br, self.bi
        cr, ci, dr, di = o.ar, o.ai, o.br, o.bi
        ac_r = ar * cr - ai * ci
        ac_i = ar * ci + ai * cr
        bd_r = br * dr - bi * di
        bd_i = br * di + bi * dr
        ad_r = ar * dr - ai * di
        ad_i = ar * di + ai * dr
        bc_r = br * cr - bi * ci
        bc_i = br * ci + bi * cr
        return QuadScalar(p, ac_r + p * bd_r, ac_i + p * bd_i, ad_r + bc_r, ad_i + bc_i)

    __rmul__ = __mul__

    def conjugate_sqrt(self) -> "QuadScalar":
        """The automorphism sqrt(p) -> -sqrt(p)."""
        return QuadScalar(self.p, self.ar, self.ai, -self.br, -self.bi)

    def norm_sqrt(self) -> GaussRational:
        """a^2 - p b^2, the norm down to Q(i)."""
        a, b = self.a, self.b
        n = a * a - b * b * GaussRational(self.p)
        return n

    def inverse(self) -> "QuadScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero QuadScalar")
        if self.is_rational():
            return QuadScalar(self.p, 1 / self.ar)
        n_inv = self.norm_sqrt().inverse()
        c = self.conjugate_sqrt()
        return QuadScalar.from_parts(self.p, c.a * n_inv, c.b * n_inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_rational():
            if not o.ar:
                raise ZeroDivisionError("division by zero QuadScalar")
            r = o.ar
            return QuadScalar(self.p, self.ar / r, self.ai / r, self.br / r, self.bi / r)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = QuadScalar(self.p, _ONE)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadScalar):
            return (
                self.p == other.p
                and self.ar == other.ar
                and self.ai == other.ai
                and self.br == other.br
                and self.bi == other.bi
            )
        if isinstance(other, (int, Rational)):
            return self.is_rational() and self.ar == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.ar, self.ai, self.br, self.bi))
        return self._hash

    # -- io -------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "a_re": format_fraction(self.ar),
            "a_im": format_fraction(self.ai),
            "b_re": format_fraction(self.br),
            "b_im": format_fraction(self.bi),
        }

    @classmethod
    def from_json(cls, p: int, data: dict) -> "QuadScalar":
        return cls(
            check_prime(p),
            parse_fraction(data["a_re"]),
            parse_fraction(data["a_im"]),
            parse_fraction(data["b_re"]),
            parse_fraction(data["b_im"]),
        )

    def __repr__(self):
        return f"QuadScalar(p={self.p}, {self})"

    def __str__(self):
        terms = []
        for coef, unit in (
            (self.ar, ""),
            (self.ai, "i"),
            (self.br, f"sqrt({self.p})"),
            (self.bi, f"i*sqrt({self.p})"),
        ):
            if not coef:
                continue
            if not unit:
                terms.append(str(coef))
            elif coef == 1:
                terms.append(unit)
            elif coef == -1:
                terms.append("-" + unit)
            else:
                terms.append(f"{coef}*{unit}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


def qs_embed(r, half_p_power: int, p: int) -> QuadScalar:
    """Return r * p**(half_p_power/2) as an exact scalar."""
    check_prime(p)
    h = half_p_power
    whole, odd = divmod(h, 2)
    value = Fraction(r) * Fraction(p) ** whole
    if odd:
        return QuadScalar(p, _ZERO, _ZERO, value)
    return QuadScalar(p, value)


def epsilon(p: int) -> QuadScalar:
    """1 if p = 1 mod 4, i if p = 3 mod 4."""
    if p % 4 == 1:
        return QuadScalar(p, _ONE)
    if p % 4 == 3:
        return QuadScalar(p, _ZERO, _ONE)
    raise ValueError("epsilon is defined for odd primes only")
