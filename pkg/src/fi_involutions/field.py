"""Exact fields of odd characteristic with an involution ``*`` of the second kind.

Two concrete fields are provided:

* :data:`QI`, the Gaussian rationals Q(i) with complex conjugation;
* :func:`gf_p2`, the finite field GF(p^2) = GF(p)[t]/(t^2 - n) with the
  Frobenius map, ``n`` the least quadratic non-residue mod ``p``.

Every element is written ``a + b*i`` over the fixed subfield ``K0`` with the
distinguished element ``i`` (``t`` for finite fields) satisfying ``i* = -i``.
No floating point is used anywhere.
"""

from __future__ import annotations

import math
import random
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from sympy import factorint

from .errors import MismatchedCarrier, NotANorm, NotInK0, NotUnitary, ParseError, ZeroElement

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")


class FieldElement:
    """Common operator plumbing; subclasses implement the arithmetic core."""

    __slots__ = ()

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise MismatchedCarrier(f"{other.field} vs {self.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self.field.one, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __str__(self):
        return self.field.format(self)

    def __repr__(self):
        return f"{type(self).__name__}({self.field.format(self)!r})"

    def norm(self):
        return self * self.star()


class QiElement(FieldElement):
    """``(a + b i) / d`` with ``gcd(a, b, d) == 1`` and ``d > 0``."""

    __slots__ = ("a", "b", "d")
    field: "GaussianRationals"

    def __init__(self, a: int = 0, b: int = 0, d: int = 1):
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            a, b, d = -a, -b, -d
        g = math.gcd(a, b, d)
        if g != 1:
            a, b, d = a // g, b // g, d // g
        self.a = a
        self.b = b
        self.d = d

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.d)

    def __add__(self, o):
        if type(o) is not QiElement:
            o = self._coerce(o)
            if o is NotImplemented:
                return o
        if self.d == o.d:
            if self.d == 1:
                return _qi_raw(self.a + o.a, self.b + o.b, 1)
            return _qi_reduced(self.a + o.a, self.b + o.b, self.d)
        return _qi_reduced(self.a * o.d + o.a * self.d, self.b * o.d + o.b * self.d, self.d * o.d)

    def __neg__(self):
        return _qi_raw(-self.a, -self.b, self.d)

    def __mul__(self, o):
        if type(o) is not QiElement:
            o = self._coerce(o)
            if o is NotImplemented:
                return o
        a, b = self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a
        d = self.d * o.d
        if d == 1:
            return _qi_raw(a, b, 1)
        return _qi_reduced(a, b, d)

    def inverse(self):
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QiElement(self.a * self.d, -self.b * self.d, n)

    def star(self):
        return _qi_raw(self.a, -self.b, self.d)

    def __eq__(self, other):
        if type(other) is QiElement:
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and Fraction(self.a, self.d) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0


def _qi_raw(a: int, b: int, d: int) -> QiElement:
    """Construct without normalising; callers guarantee the invariant."""
    x = object.__new__(QiElement)
    x.a, x.b, x.d = a, b, d
    return x


def _qi_reduced(a: int, b: int, d: int) -> QiElement:
    """Normalise by the common gcd; ``d`` must already be positive."""
    g = math.gcd(a, b, d)
    if g != 1:
        a, b, d = a // g, b // g, d // g
    x = object.__new__(QiElement)
    x.a, x.b, x.d = a, b, d
    return x


class GFElement(FieldElement):
    """``a + b t`` with residues ``a, b`` in ``[0, p)``."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: "QuadraticFiniteField", a: int, b: int = 0):
        self.field = field
        self.a = a % field.p
        self.b = b % field.p

    def __add__(self, o):
        if type(o) is not GFElement or o.field is not self.field:
            o = self._coerce(o)
            if o is NotImplemented:
                return o
        p = self.field.p
        return GFElement(self.field, (self.a + o.a) % p, (self.b + o.b) % p)

    def __neg__(self):
        return GFElement(self.field, -self.a, -self.b)

    def __mul__(self, o):
        if type(o) is not GFElement or o.field is not self.field:
            o = self._coerce(o)
            if o is NotImplemented:
                return o
        F = self.field
        return GFElement(F, self.a * o.a + F.n * self.b * o.b, self.a * o.b + self.b * o.a)

    def inverse(self):
        F = self.field
        n = (self.a * self.a - F.n * self.b * self.b) % F.p
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        m = pow(n, F.p - 2, F.p)
        return GFElement(F, self.a * m, -self.b * m)

    def star(self):
        return GFElement(self.field, self.a, -self.b)

    def __eq__(self, other):
        if type(other) is GFElement:
            return other.field is self.field and self.a == other.a and self.b == other.b
        if isinstance(other, int):
            return self.b == 0 and self.a == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    @property
    def code(self) -> int:
        return self.a + self.field.p * self.b


class InvolutiveField:
    """A field of characteristic != 2 with a fixed second-kind involution."""

    kind: str
    symbol: str
    is_finite: bool
    characteristic: int

    # -- construction -------------------------------------------------------
    def __call__(self, a=0, b=0) -> FieldElement:
        raise NotImplementedError

    @property
    def zero(self) -> FieldElement:
        return self(0)

    @property
    def one(self) -> FieldElement:
        return self(1)

    @property
    def i(self) -> FieldElement:
        """The distinguished element with ``i* = -i`` and ``i**2`` in K0."""
        return self(0, 1)

    # -- the involution and its invariants ----------------------------------
    def star(self, x: FieldElement) -> FieldElement:
        return x.star()

    def is_in_K0(self, x: FieldElement) -> bool:
        return x == x.star()

    def norm(self, x: FieldElement) -> FieldElement:
        return x * x.star()

    def components(self, x: FieldElement) -> tuple[FieldElement, FieldElement]:
        """Coordinates ``(a, b)`` in K0 with ``x = a + b*i``."""
        raise NotImplementedError

    def sum_of_products(self, terms) -> FieldElement:
        """``sum of x * y`` over the pairs in ``terms``."""
        acc = self.zero
        for x, y in terms:
            acc = acc + x * y
        return acc

    def _check_K0_unit(self, c: FieldElement) -> None:
        if not self.is_in_K0(c):
            raise NotInK0(f"{c} is not fixed by the involution")
        if not c:
            raise ZeroElement("0 is not in K0^x")

    def is_in_K1(self, c: FieldElement) -> bool:
        raise NotImplementedError

    def norm_preimage(self, c: FieldElement) -> FieldElement:
        raise NotImplementedError

    def unitary_to_ratio(self, k: FieldElement) -> FieldElement:
        """Return ``a`` with ``a* / a == k`` for a unitary ``k`` (``k k* = 1``)."""
        if not k or k * k.star() != self.one:
            raise NotUnitary(f"{k} is not unitary")
        a, b = self.components(k)
        if not b:
            # k = +-1
            return self.one if k == self.one else self.i
        # kk* = a^2 - b^2 i^2 = 1 forces b = 0 when a = -1
        assert a != -self.one, "unreachable: a = -1 with b != 0"
        result = (self.one + a) - b * self.i
        if result.star() / result != k:
            raise AssertionError(f"ratio construction failed for {k}")
        return result

    # -- group-theoretic data used by the classifier and H^1 ----------------
    def k0_mod_k1_order(self) -> int | None:
        """``|K0^x / K1|``; ``None`` when infinite."""
        raise NotImplementedError

    def roots_of_unity_count(self, d: int) -> int:
        """Number of ``d``-th roots of unity in the field."""
        raise NotImplementedError

    # -- enumeration, sampling, text ----------------------------------------
    def elements(self) -> Iterator[FieldElement]:
        raise TypeError(f"{self} is infinite")

    def nonzero_elements(self) -> Iterator[FieldElement]:
        return (x for x in self.elements() if x)

    def random_element(self, rng: random.Random, nonzero: bool = False) -> FieldElement:
        raise NotImplementedError

    def random_K0(self, rng: random.Random, nonzero: bool = False) -> FieldElement:
        raise NotImplementedError

    def format(self, x: FieldElement) -> str:
        raise NotImplementedError

    def parse(self, text: str) -> FieldElement:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError


class GaussianRationals(InvolutiveField):
    kind = "gaussian_rational"
    symbol = "i"
    is_finite = False
    characteristic = 0

    def __call__(self, a=0, b=0) -> QiElement:
        a, b = Fraction(a), Fraction(b)
        d = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return QiElement(a.numerator * (d // a.denominator), b.numerator * (d // b.denominator), d)

    @property
    def zero(self):
        return QiElement(0, 0, 1)

    @property
    def one(self):
        return QiElement(1, 0, 1)

    @property
    def i(self):
        return QiElement(0, 1, 1)

    def components(self, x):
        return QiElement(x.a, 0, x.d), QiElement(x.b, 0, x.d)

    def sum_of_products(self, terms):
        # accumulate over a common denominator and reduce once
        A = B = 0
        D = 1
        for x, y in terms:
            a = x.a * y.a - x.b * y.b
            b = x.a * y.b + x.b * y.a
            d = x.d * y.d
            if d != D:
                if D % d == 0:
                    s = D // d
                    a, b = a * s, b * s
                else:
                    g = math.gcd(D, d)
                    L = D // g * d
                    s = L // D
                    A, B = A * s, B * s
                    s = L // d
                    a, b = a * s, b * s
                    D = L
            A += a
            B += b
        return _qi_reduced(A, B, D)

    def is_in_K1(self, c):
        self._check_K0_unit(c)
        r = c.re
        if r < 0:
            return False
        return _is_sum_of_two_squares(r.numerator * r.denominator)

    def norm_preimage(self, c):
        """Canonical ``a`` with ``a a* = c``.

        ``c = m/n`` is written as ``(m n) / n**2``; among the Gaussian integers
        ``z`` of norm ``m n`` the one with the largest ``(re, im)`` is chosen and
        ``z / n`` is returned.
        """
        if not self.is_in_K1(c):
            raise NotANorm(f"{c} is not a norm from Q(i)")
        r = c.re
        m, n = r.numerator, r.denominator
        z = max(_gaussian_integers_of_norm(m * n))
        return QiElement(z[0], z[1], n)

    def k0_mod_k1_order(self):
        return None

    def roots_of_unity_count(self, d):
        return math.gcd(d, 4)

    def random_element(self, rng, nonzero=False, bound=9, den=4):
        while True:
            x = QiElement(rng.randint(-bound, bound), rng.randint(-bound, bound), rng.randint(1, den))
            if x or not nonzero:
                return x

    def random_K0(self, rng, nonzero=False, bound=9, den=4):
        while True:
            x = QiElement(rng.randint(-bound, bound), 0, rng.randint(1, den))
            if x or not nonzero:
                return x

    def format(self, x):
        re_, im = x.re, x.im
        if im == 0:
            return str(re_)
        if re_ == 0:
            return f"{im}i"
        return f"{re_}{'+' if im > 0 else '-'}{abs(im)}i"

    def parse(self, text):
        s = str(text).replace(" ", "")
        if not s:
            raise ParseError("empty field element")
        if s.endswith("i"):
            body = s[:-1]
            cut = max(body.rfind("+"), body.rfind("-"))
            real, imag = (body[:cut], body[cut:]) if cut > 0 else ("", body)
            if imag in ("", "+", "-"):
                imag += "1"
        else:
            real, imag = s, "0"
        try:
            return self(_parse_rational(real) if real else 0, _parse_rational(imag))
        except ZeroDivisionError as exc:
            raise ParseError(f"zero denominator in {text!r}") from exc

    def descriptor(self):
        return {"type": "gaussian_rational"}

    def __repr__(self):
        return "Q(i)"

    def __reduce__(self):
        return (_qi_singleton, ())


QI = GaussianRationals()
QiElement.field = QI


def _qi_singleton():
    return QI


class QuadraticFiniteField(InvolutiveField):
    """GF(p^2) realised as GF(p)[t]/(t^2 - n); the involution is Frobenius."""

    kind = "finite_quadratic"
    symbol = "t"
    is_finite = True

    def __init__(self, p: int):
        if p < 3 or p % 2 == 0 or any(p % q == 0 for q in range(3, math.isqrt(p) + 1, 2)):
            raise ValueError(f"p must be an odd prime, got {p}")
        self.p = p
        self.characteristic = p
        self.n = next(r for r in range(2, p) if pow(r, (p - 1) // 2, p) == p - 1)
        self.order = p * p

    def __call__(self, a=0, b=0) -> GFElement:
        if isinstance(a, Fraction):
            a = a.numerator * pow(a.denominator, -1, self.p)
        if isinstance(b, Fraction):
            b = b.numerator * pow(b.denominator, -1, self.p)
        return GFElement(self, a, b)

    def from_code(self, code: int) -> GFElement:
        return GFElement(self, code % self.p, code // self.p)

    def components(self, x):
        return GFElement(self, x.a, 0), GFElement(self, x.b, 0)

    def sum_of_products(self, terms):
        A = B = 0
        n = self.n
        for x, y in terms:
            A += x.a * y.a + n * x.b * y.b
            B += x.a * y.b + x.b * y.a
        return GFElement(self, A, B)

    def is_in_K1(self, c):
        # the norm GF(p^2)^x -> GF(p)^x is surjective
        self._check_K0_unit(c)
        return True

    def norm_preimage(self, c):
        self._check_K0_unit(c)
        for x in self.elements():
            if x and x * x.star() == c:
                return x
        raise NotANorm(f"{c} is not a norm")  # pragma: no cover

    def k0_mod_k1_order(self):
        return 1

    def roots_of_unity_count(self, d):
        return math.gcd(d, self.order - 1)

    def elements(self):
        p = self.p
        for a in range(p):
            for b in range(p):
                yield GFElement(self, a, b)

    def random_element(self, rng, nonzero=False):
        while True:
            x = GFElement(self, rng.randrange(self.p), rng.randrange(self.p))
            if x or not nonzero:
                return x

    def random_K0(self, rng, nonzero=False):
        lo = 1 if nonzero else 0
        return GFElement(self, rng.randrange(lo, self.p), 0)

    def format(self, x):
        if x.b == 0:
            return str(x.a)
        if x.a == 0:
            return f"{x.b}t"
        return f"{x.a}+{x.b}t"

    def parse(self, text):
        s = str(text).replace(" ", "")
        if not s:
            raise ParseError("empty field element")
        if s.endswith("t"):
            body = s[:-1]
            cut = max(body.rfind("+"), body.rfind("-"))
            real, coef = (body[:cut], body[cut:]) if cut > 0 else ("", body)
            if coef in ("", "+", "-"):
                coef += "1"
        else:
            real, coef = s, "0"
        for part in (real, coef):
            if part and not re.fullmatch(r"[+-]?\d+", part):
                raise ParseError(f"bad GF({self.p}^2) element {text!r}")
        return GFElement(self, int(real) if real else 0, int(coef))

    def descriptor(self):
        return {"type": "gf_p2", "p": self.p}

    def __repr__(self):
        return f"GF({self.p}^2)"

    def __reduce__(self):
        return (gf_p2, (self.p,))


@lru_cache(maxsize=None)
def gf_p2(p: int) -> QuadraticFiniteField:
    """The (cached, hence identity-comparable) field GF(p^2)."""
    return QuadraticFiniteField(p)


def field_from_descriptor(desc) -> InvolutiveField:
    """Accept a JSON descriptor dict or a CLI spelling ``qi`` / ``gf:p``."""
    if isinstance(desc, InvolutiveField):
        return desc
    if isinstance(desc, str):
        s = desc.strip().lower()
        if s in ("qi", "q(i)", "gaussian_rational"):
            return QI
        m = re.fullmatch(r"gf:(\d+)", s)
        if m:
            return gf_p2(int(m.group(1)))
        raise ParseError(f"unknown field {desc!r} (expected 'qi' or 'gf:p')")
    if isinstance(desc, dict):
        kind = desc.get("type")
        if kind == "gaussian_rational":
            return QI
        if kind == "gf_p2":
            try:
                return gf_p2(int(desc["p"]))
            except (KeyError, ValueError) as exc:
                raise ParseError(f"bad gf_p2 descriptor {desc!r}: {exc}") from exc
    raise ParseError(f"unknown field descriptor {desc!r}")


# -- module-level spellings of the field operations -------------------------

def star(x: FieldElement) -> FieldElement:
    return x.star()


def norm(x: FieldElement) -> FieldElement:
    return x * x.star()


def is_in_K0(x: FieldElement) -> bool:
    return x.field.is_in_K0(x)


def is_in_K1(c: FieldElement) -> bool:
    return c.field.is_in_K1(c)


def norm_preimage(c: FieldElement) -> FieldElement:
    return c.field.norm_preimage(c)


def unitary_to_ratio(k: FieldElement) -> FieldElement:
    return k.field.unitary_to_ratio(k)


def parse_element(text: str, field: InvolutiveField) -> FieldElement:
    return field.parse(text)


def format_element(x: FieldElement) -> str:
    return x.field.format(x)


# -- integer helpers ---------------------------------------------------------

def _parse_rational(text: str) -> Fraction:
    if not _RATIONAL.fullmatch(text):
        raise ParseError(f"bad rational {text!r}")
    return Fraction(text)


def _is_sum_of_two_squares(n: int) -> bool:
    if n <= 0:
        return n == 0
    return all(e % 2 == 0 for q, e in factorint(n).items() if q % 4 == 3)


def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gpow(x, e):
    r = (1, 0)
    for _ in range(e):
        r = _gmul(r, x)
    return r


def _prime_as_two_squares(p: int) -> tuple[int, int]:
    """``(u, v)`` with ``u**2 + v**2 == p`` for a prime ``p = 1 mod 4``."""
    x = next(pow(g, (p - 1) // 4, p) for g in range(2, p) if pow(g, (p - 1) // 2, p) == p - 1)
    a, b = p, x
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    u = b
    v = math.isqrt(p - u * u)
    assert u * u + v * v == p
    return u, v


def _gaussian_integers_of_norm(n: int) -> list[tuple[int, int]]:
    """All Gaussian integers ``z`` with ``|z|**2 == n``."""
    if n == 0:
        return [(0, 0)]
    options = [[(1, 0)]]
    for q, e in factorint(n).items():
        if q == 2:
            options.append([_gpow((1, 1), e)])
        elif q % 4 == 3:
            if e % 2:
                return []
            options.append([(q ** (e // 2), 0)])
        else:
            u, v = _prime_as_two_squares(q)
            pi, pibar = (u, v), (u, -v)
            options.append([_gmul(_gpow(pi, j), _gpow(pibar, e - j)) for j in range(e + 1)])
    reps = [(1, 0)]
    for opts in options:
        reps = [_gmul(r, o) for r in reps for o in opts]
    out = set()
    for r in reps:
        for unit in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            out.add(_gmul(r, unit))
    return sorted(out)
