"""Polynomials and rational functions in X = p^(-2s) over Q(i)(sqrt p).

A ``RatFunc`` is kept in canonical form: numerator and denominator are
coprime and the lowest-degree nonzero coefficient of the denominator is 1.
With that normalisation two canonical forms agree iff the functions agree,
but ``==`` still decides equality by cross-multiplication.

``AffineExponent`` tracks exponents c0 + c1*s of p, which is how the
prefactor p^(n(k/2-s)) and the eigenvalue exponents l(s, j) are handled
without ever taking a square root of X.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalars import QuadScalar, RingMismatchError, check_prime, format_fraction, parse_fraction, qs_embed

__all__ = [
    "Poly",
    "RatFunc",
    "AffineExponent",
    "NotRepresentable",
    "rf_substitute_fe",
    "substitute_reciprocal",
    "exponent_l",
    "rf_to_monomial",
    "monomial_exponent",
]


class NotRepresentable(ValueError):
    """An exponent of p cannot be written as a monomial in X = p^(-2s)."""


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Dense polynomial in X; ``coeffs[d]`` is the coefficient of X^d."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs=()):
        self.p = p
        cs = []
        for c in coeffs:
            if not isinstance(c, QuadScalar):
                c = QuadScalar(p, Fraction(c))
            elif c.p != p:
                raise RingMismatchError(f"coefficient over p={c.p} in polynomial over p={p}")
            cs.append(c)
        self.coeffs = _strip(cs)

    @classmethod
    def _raw(cls, p, coeffs):
        obj = object.__new__(cls)
        obj.p = p
        obj.coeffs = _strip(coeffs)
        return obj

    @classmethod
    def zero(cls, p):
        return cls._raw(p, ())

    @classmethod
    def const(cls, p, c):
        if not isinstance(c, QuadScalar):
            c = QuadScalar(p, Fraction(c))
        return cls._raw(p, (c,))

    @classmethod
    def monomial(cls, p, c, degree: int):
        if not isinstance(c, QuadScalar):
            c = QuadScalar(p, Fraction(c))
        zero = QuadScalar(p)
        return cls._raw(p, [zero] * degree + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> QuadScalar:
        return self.coeffs[-1]

    def low_order(self) -> int:
        """Index of the lowest nonzero coefficient."""
        for d, c in enumerate(self.coeffs):
            if not c.is_zero():
                return d
        raise ValueError("zero polynomial has no lowest term")

    def __getitem__(self, d):
        if 0 <= d < len(self.coeffs):
            return self.coeffs[d]
        return QuadScalar(self.p)

    def _check(self, other):
        if other.p != self.p:
            raise RingMismatchError(f"polynomials over p={self.p} and p={other.p}")

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for d, c in enumerate(b):
            out[d] = out[d] + c
        return Poly._raw(self.p, out)

    def __neg__(self):
        return Poly._raw(self.p, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QuadScalar):
            if other.is_zero():
                return Poly.zero(self.p)
            return Poly._raw(self.p, [c * other for c in self.coeffs])
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.p)
        zero = QuadScalar(self.p)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return Poly._raw(self.p, out)

    def divmod(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = other.lead().inverse()
        if len(rem) <= dq:
            return Poly.zero(self.p), self
        quo = [QuadScalar(self.p)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c.is_zero():
                continue
            f = c * inv_lead
            quo[k - dq] = f
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    rem[k - dq + j] = rem[k - dq + j] - f * b
        return Poly._raw(self.p, quo), Poly._raw(self.p, rem[:dq])

    def monic(self):
        if self.is_zero():
            return self
        return self * self.lead().inverse()

    def gcd(self, other):
        """Monic gcd by the Euclidean algorithm."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def shift(self, k: int):
        """Multiply by X^k, k >= 0."""
        if self.is_zero():
            return self
        return Poly._raw(self.p, [QuadScalar(self.p)] * k + list(self.coeffs))

    def __call__(self, x):
        acc = QuadScalar(self.p)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def to_json(self):
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, p, data):
        return cls(p, [QuadScalar.from_json(p, c) for c in data])

    def __repr__(self):
        return f"Poly(p={self.p}, {self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for d, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = str(c)
            compound = " " in cs.strip("-")
            mono = "" if d == 0 else ("X" if d == 1 else f"X^{d}")
            if not mono:
                parts.append(f"({cs})" if compound and len(self.coeffs) > 1 else cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}" if compound else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class RatFunc:
    """Canonical quotient num/den of polynomials in X over Q(i)(sqrt p)."""

    __slots__ = ("p", "num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, canonical: bool = False):
        p = num.p
        if den is None:
            den = Poly.const(p, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.p = p
        if canonical:
            self.num, self.den = num, den
            return
        if num.is_zero():
            self.num, self.den = num, Poly.const(p, 1)
            return
        if den.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        scale = den[den.low_order()]
        if scale != 1:
            inv = scale.inverse()
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, p, c) -> "RatFunc":
        check_prime(p)
        return cls(Poly.const(p, c), canonical=True)

    @classmethod
    def zero(cls, p) -> "RatFunc":
        return cls(Poly.zero(p), Poly.const(p, 1), canonical=True)

    @classmethod
    def one(cls, p) -> "RatFunc":
        return cls.const(p, 1)

    @classmethod
    def x(cls, p) -> "RatFunc":
        return cls(Poly.monomial(p, 1, 1), canonical=True)

    @classmethod
    def monomial(cls, p, c, degree: int) -> "RatFunc":
        """c * X^degree; negative degrees allowed."""
        if degree >= 0:
            return cls(Poly.monomial(p, c, degree), canonical=not _is_zero_scalar(c))
        return cls(Poly.const(p, c), Poly.monomial(p, 1, -degree), canonical=not _is_zero_scalar(c))

    @classmethod
    def from_coeffs(cls, p, num, den=(1,)) -> "RatFunc":
        return cls(Poly(p, num), Poly(p, den))

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> QuadScalar:
        if not self.is_constant():
            raise ValueError("rational function is not constant")
        return self.num[0]

    def coefficients(self):
        yield from self.num.coeffs
        yield from self.den.coeffs

    def is_over_q(self) -> bool:
        """True when every coefficient is rational (no i, no sqrt p)."""
        return all(c.is_rational() for c in self.coefficients())

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.p != self.p:
                raise RingMismatchError(f"rational functions over p={self.p} and p={other.p}")
            return other
        if isinstance(other, (int, Fraction, QuadScalar)):
            return RatFunc.const(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return RatFunc.zero(self.p)
        if o.is_constant():
            c = o.num[0]
            return RatFunc(self.num * c, self.den, canonical=True) if self.den[self.den.low_order()] == 1 else RatFunc(self.num * c, self.den)
        if self.is_constant():
            return o * self
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
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
        result = RatFunc.one(self.p)
        for _ in range(abs(e)):
            result = result * base
        return result

    def __call__(self, x):
        """Evaluate at a scalar; raises ZeroDivisionError at a pole."""
        if not isinstance(x, QuadScalar):
            x = QuadScalar(self.p, Fraction(x))
        d = self.den(x)
        if d.is_zero():
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) / d

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadScalar)):
            other = RatFunc.const(self.p, other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if other.p != self.p:
            return False
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.p, self.num, self.den))

    def canonical_key(self):
        return (self.p, self.num.coeffs, self.den.coeffs)

    # -- io -------------------------------------------------------------
    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, p, data) -> "RatFunc":
        return cls(Poly.from_json(p, data["num"]), Poly.from_json(p, data["den"]))

    def __str__(self):
        if self.den.degree == 0 and self.den[0] == 1:
            return str(self.num)
        def wrap(poly):
            text = str(poly)
            return f"({text})" if " " in text else text

        return f"{wrap(self.num)} / {wrap(self.den)}"

    def __repr__(self):
        return f"RatFunc(p={self.p}, {self})"


def _is_zero_scalar(c):
    return c.is_zero() if isinstance(c, QuadScalar) else c == 0


def substitute_reciprocal(f: RatFunc, c) -> RatFunc:
    """Return g with g(X) = f(c / X)."""
    p = f.p
    if not isinstance(c, QuadScalar):
        c = QuadScalar(p, Fraction(c))
    top = max(f.num.degree, f.den.degree, 0)

    def flip(poly: Poly) -> Poly:
        out = [QuadScalar(p)] * (top + 1)
        power = QuadScalar(p, 1)
        for i, a in enumerate(poly.coeffs):
            out[top - i] = a * power
            power = power * c
        return Poly._raw(p, out)

    return RatFunc(flip(f.num), flip(f.den))


def rf_substitute_fe(f: RatFunc, n: int) -> RatFunc:
    """Apply s -> (n+1)/2 - s, i.e. X -> p^(-(n+1)) / X."""
    if n < 1:
        raise ValueError("degree n must be at least 1")
    return substitute_reciprocal(f, Fraction(1, f.p ** (n + 1)))


@dataclass(frozen=True)
class AffineExponent:
    """The exponent c0 + c1*s of p."""

    c0: Fraction
    c1: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c0", Fraction(self.c0))
        object.__setattr__(self, "c1", Fraction(self.c1))

    def __add__(self, other):
        return AffineExponent(self.c0 + other.c0, self.c1 + other.c1)

    def __sub__(self, other):
        return AffineExponent(self.c0 - other.c0, self.c1 - other.c1)

    def __neg__(self):
        return AffineExponent(-self.c0, -self.c1)

    def at(self, s) -> Fraction:
        return self.c0 + self.c1 * Fraction(s)

    def substitute_fe(self, n: int) -> "AffineExponent":
        """Compose with s -> kappa_n - s."""
        kappa = Fraction(n + 1, 2)
        return AffineExponent(self.c0 + self.c1 * kappa, -self.c1)

    def to_json(self):
        return {"c0": format_fraction(self.c0), "c1": format_fraction(self.c1)}

    @classmethod
    def from_json(cls, data):
        return cls(parse_fraction(data["c0"]), parse_fraction(data["c1"]))

    def __str__(self):
        return f"{self.c0} + ({self.c1})*s"


def exponent_l(n: int, k: int, j: int) -> AffineExponent:
    """l(s, j) = n(k/2 - s) + 2sj - j(j+1)/2."""
    if not 0 <= j <= n:
        raise ValueError(f"need 0 <= j <= n, got j={j}, n={n}")
    return AffineExponent(Fraction(n * k, 2) - Fraction(j * (j + 1), 2), 2 * j - n)


def rf_to_monomial(e: AffineExponent, p: int) -> RatFunc:
    """p^(c0 + c1 s) = p^c0 * X^(-c1/2) as a RatFunc."""
    half_c1 = e.c1 / 2
    if half_c1.denominator != 1:
        raise NotRepresentable(f"s-coefficient {e.c1} is not an even integer")
    twice_c0 = 2 * e.c0
    if twice_c0.denominator != 1:
        raise NotRepresentable(f"constant exponent {e.c0} is not a half-integer")
    return RatFunc.monomial(p, qs_embed(1, int(twice_c0), p), -int(half_c1))


def _half_power_of_p(c: QuadScalar) -> int:
    """Return h with c = p^(h/2), or raise NotRepresentable."""
    p = c.p
    if c.is_rational() and c.ar > 0:
        r = c.ar
    elif not (c.ar or c.ai or c.bi) and c.br > 0:
        r = c.br
    else:
        raise NotRepresentable(f"{c} is not a power of sqrt({p})")
    odd = 0 if c.is_rational() else 1
    k = 0
    num, den = r.numerator, r.denominator
    if num != 1 and den != 1:
        raise NotRepresentable(f"{c} is not a power of sqrt({p})")
    x = num if den == 1 else den
    sign = 1 if den == 1 else -1
    while x % p == 0:
        x //= p
        k += 1
    if x != 1:
        raise NotRepresentable(f"{c} is not a power of sqrt({p})")
    return 2 * sign * k + odd


def monomial_exponent(f: RatFunc) -> AffineExponent:
    """Inverse of ``rf_to_monomial``: read p^(c0 + c1 s) off c * X^d."""
    if f.is_zero():
        raise NotRepresentable("zero is not a monomial")
    if len([c for c in f.num.coeffs if not c.is_zero()]) != 1 or len(
        [c for c in f.den.coeffs if not c.is_zero()]
    ) != 1:
        raise NotRepresentable(f"{f} is not a monomial")
    dn, dd = f.num.low_order(), f.den.low_order()
    coef = f.num[dn] / f.den[dd]
    h = _half_power_of_p(coef)
    return AffineExponent(Fraction(h, 2), -2 * (dn - dd))
