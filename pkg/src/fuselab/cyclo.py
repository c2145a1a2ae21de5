"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A CycloNumber is a finite rational combination sum_e c_e * zeta_n^e held in a
canonical form: exponents are reduced to a Zumbroich-style basis of size
phi(n), the order n is lowered to the smallest field containing the value,
and the coefficients share one positive denominator with overall gcd 1.
Because the form is unique, equality is plain component comparison.

The basis at order n consists of the exponents e such that for every prime
power p^v exactly dividing n, the top base-p digit of (e mod p^v) is not
p - 1.  Exponents outside the basis are rewritten through the vanishing sums
sum_{j=0}^{p-1} zeta_n^(e + j*n/p) = 0.  A rewrite at p leaves residues
modulo the other prime powers untouched, so the reduction terminates and the
canonical support of an element of Q(zeta_{n/g}) is contained in g*Z; the
order descent below relies on exactly that.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import mpmath

from .errors import DegenerateScalar

Rational = int | Fraction


@lru_cache(maxsize=None)
def _prime_powers(n: int) -> tuple[tuple[int, int], ...]:
    """Pairs (p, p^v) with p^v exactly dividing n."""
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            out.append((p, q))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, m))
    return tuple(out)


@lru_cache(maxsize=None)
def _expansion(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """expansion[e] = ((basis_exponent, coefficient), ...) for zeta_n^e."""
    pps = _prime_powers(n)
    memo: dict[int, tuple[tuple[int, int], ...]] = {}

    def expand(e: int) -> tuple[tuple[int, int], ...]:
        got = memo.get(e)
        if got is not None:
            return got
        for p, q in pps:
            if (e % q) // (q // p) == p - 1:
                acc: dict[int, int] = {}
                step = n // p
                for j in range(1, p):
                    for b, s in expand((e + j * step) % n):
                        acc[b] = acc.get(b, 0) - s
                result = tuple(sorted((b, s) for b, s in acc.items() if s))
                break
        else:
            result = ((e, 1),)
        memo[e] = result
        return result

    return tuple(expand(e) for e in range(n))


def _canonical(order: int, num: dict[int, int], den: int) -> tuple[int, dict[int, int], int]:
    """Reduce to basis exponents, descend to the minimal order, strip gcd."""
    acc: dict[int, int] = {}
    while True:
        table = _expansion(order)
        acc = {}
        for e, c in num.items():
            if not c:
                continue
            for b, s in table[e % order]:
                acc[b] = acc.get(b, 0) + s * c
        acc = {e: c for e, c in acc.items() if c}
        if not acc:
            return 1, {}, 1
        g = order
        for e in acc:
            g = gcd(g, e)
        if g == 1:
            break
        order //= g
        num = {e // g: c for e, c in acc.items()}
    g = den
    for c in acc.values():
        g = gcd(g, c)
    if g > 1:
        acc = {e: c // g for e, c in acc.items()}
        den //= g
    return order, acc, den


class CycloNumber:
    """Immutable element of a cyclotomic field, always in canonical form."""

    __slots__ = ("_order", "_num", "_den", "_hash")

    def __init__(self, order: int, coeffs):
        if not isinstance(order, int) or order < 1:
            raise ValueError(f"order must be a positive integer, got {order!r}")
        if isinstance(coeffs, dict):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        den = 1
        pairs: list[tuple[int, Fraction]] = []
        for e, c in items:
            if not isinstance(e, int):
                raise ValueError(f"exponent must be an integer, got {e!r}")
            f = Fraction(c)
            if f:
                pairs.append((e, f))
                den = lcm(den, f.denominator)
        num: dict[int, int] = {}
        for e, f in pairs:
            k = e % order
            num[k] = num.get(k, 0) + int(f * den)
        self._order, self._num, self._den = _canonical(order, num, den)
        self._hash: int | None = None

    @classmethod
    def _raw(cls, order: int, num: dict[int, int], den: int) -> "CycloNumber":
        """Wrap un-normalized integer data (canonicalized here)."""
        self = object.__new__(cls)
        self._order, self._num, self._den = _canonical(order, num, den)
        self._hash = None
        return self

    @classmethod
    def from_rational(cls, value: Rational) -> "CycloNumber":
        f = Fraction(value)
        return cls._raw(1, {0: f.numerator}, f.denominator)

    # -- inspection ------------------------------------------------------

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Dense coefficient vector of length `order` over powers of zeta."""
        return tuple(
            Fraction(self._num.get(e, 0), self._den) for e in range(self._order)
        )

    @property
    def is_zero(self) -> bool:
        return not self._num

    @property
    def is_rational(self) -> bool:
        return self._order == 1

    def as_rational(self) -> Fraction:
        if self._order != 1:
            raise ValueError(f"{self} is irrational")
        return Fraction(self._num.get(0, 0), self._den)

    # -- field operations ------------------------------------------------

    def _lifted(self, n: int) -> dict[int, int]:
        f = n // self._order
        if f == 1:
            return self._num
        return {e * f: c for e, c in self._num.items()}

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        n = lcm(self._order, other._order)
        den = lcm(self._den, other._den)
        fa, fb = den // self._den, den // other._den
        num = {e: c * fa for e, c in self._lifted(n).items()}
        for e, c in other._lifted(n).items():
            num[e] = num.get(e, 0) + c * fb
        return CycloNumber._raw(n, num, den)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(CycloNumber)
        out._order = self._order
        out._num = {e: -c for e, c in self._num.items()}
        out._den = self._den
        out._hash = None
        return out

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return ZERO
        if other._order == 1:
            scale = other._num[0]
            return CycloNumber._raw(
                self._order,
                {e: c * scale for e, c in self._num.items()},
                self._den * other._den,
            )
        if self._order == 1:
            return other * self
        n = lcm(self._order, other._order)
        a, b = self._lifted(n), other._lifted(n)
        num: dict[int, int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                k = e1 + e2
                if k >= n:
                    k -= n
                num[k] = num.get(k, 0) + c1 * c2
        return CycloNumber._raw(n, num, self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero:
            raise DegenerateScalar("division by zero in a cyclotomic field")
        if self._order == 1:
            f = Fraction(self._den, self._num[0])
            return CycloNumber._raw(1, {0: f.numerator}, f.denominator)
        if len(self._num) == 1:
            ((e, c),) = self._num.items()
            f = Fraction(self._den, c)
            return CycloNumber._raw(self._order, {-e % self._order: f.numerator}, f.denominator)
        # Galois-norm inverse: multiply the conjugates, divide by the norm.
        m = self._order
        partial = ONE
        for j in range(2, m):
            if gcd(j, m) == 1:
                partial = partial * self.galois(j)
        norm = self * partial
        assert norm.is_rational, "norm of a cyclotomic number must be rational"
        return partial * CycloNumber.from_rational(1 / norm.as_rational())

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def galois(self, j: int) -> "CycloNumber":
        """Apply zeta -> zeta^j; j must be coprime to the order."""
        if gcd(j, self._order) != 1:
            raise ValueError(f"{j} is not coprime to order {self._order}")
        return CycloNumber._raw(
            self._order, {(j * e) % self._order: c for e, c in self._num.items()}, self._den
        )

    def conjugate(self) -> "CycloNumber":
        if self._order == 1:
            return self
        return self.galois(self._order - 1)

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (
            self._order == other._order
            and self._den == other._den
            and self._num == other._num
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self._order, self._den, tuple(sorted(self._num.items()))))
            self._hash = h
        return h

    def __str__(self):
        if self.is_zero:
            return "0"
        if self._order == 1:
            return str(Fraction(self._num[0], self._den))
        parts = []
        for e, c in sorted(self._num.items()):
            mono = "1" if e == 0 else (f"z{self._order}" if e == 1 else f"z{self._order}^{e}")
            if e == 0:
                term = str(abs(c))
            elif abs(c) == 1:
                term = mono
            else:
                term = f"{abs(c)}*{mono}"
            parts.append(("- " if c < 0 else "+ ", term))
        body = parts[0][1] if parts[0][0] == "+ " else "-" + parts[0][1]
        for sign, term in parts[1:]:
            body += f" {sign.strip()} {term}"
        if self._den != 1:
            body = f"({body})/{self._den}"
        return body

    def __repr__(self):
        return f"CycloNumber({self})"


def _coerce(x) -> CycloNumber | None:
    if isinstance(x, CycloNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return CycloNumber.from_rational(x)
    return None


ZERO = CycloNumber(1, {0: 0})
ONE = CycloNumber(1, {0: 1})


def zeta(n: int, k: int = 1) -> CycloNumber:
    """The root of unity zeta_n^k."""
    return CycloNumber(n, {k: 1})


def cyclo_arith(a: CycloNumber, b: CycloNumber, op: str) -> CycloNumber:
    """Dispatch one exact field operation; op in {add, sub, mul, div}."""
    ca, cb = _coerce(a), _coerce(b)
    if ca is None or cb is None:
        raise TypeError("cyclo_arith expects cyclotomic or rational operands")
    if op == "add":
        return ca + cb
    if op == "sub":
        return ca - cb
    if op == "mul":
        return ca * cb
    if op == "div":
        return ca / cb
    raise ValueError(f"unknown operation {op!r}")


def sin_ratio(k: int, h: int) -> CycloNumber:
    """Exact value of sin(k*pi/h) / sin(pi/h).

    Realized through the geometric-series identity
    sin(k*pi/h)/sin(pi/h) = sum_{j=0}^{k-1} zeta_{2h}^(k-1-2j),
    so the result lives in Q(zeta_{2h}) (a subfield of Q(zeta_{4h})).
    sin_ratio(0, h) = 0, sin_ratio(1, h) = 1, sin_ratio(2, h) = 2cos(pi/h).
    """
    if not isinstance(k, int) or not isinstance(h, int):
        raise ValueError("sin_ratio expects integer arguments")
    if h < 2:
        raise ValueError(f"h must be at least 2, got {h}")
    if not 0 <= k <= 2 * h:
        raise ValueError(f"k must lie in [0, 2h], got k={k}, h={h}")
    n = 2 * h
    num: dict[int, int] = {}
    for j in range(k):
        e = (k - 1 - 2 * j) % n
        num[e] = num.get(e, 0) + 1
    return CycloNumber._raw(n, num, 1)


def basis_coordinates(x: CycloNumber, order: int) -> dict[int, Fraction]:
    """Coordinates of x over the canonical basis of the order-`order` field.

    `order` must be a multiple of x.order. The map is linear and injective,
    so rational row reduction over these coordinates decides cyclotomic
    linear identities exactly.
    """
    if not isinstance(order, int) or order < 1 or order % x._order:
        raise ValueError(f"order must be a positive multiple of {x._order}, got {order!r}")
    k = order // x._order
    table = _expansion(order)
    acc: dict[int, int] = {}
    for e, c in x._num.items():
        for b, s in table[(e * k) % order]:
            acc[b] = acc.get(b, 0) + s * c
    return {b: Fraction(c, x._den) for b, c in acc.items() if c}


def embed_complex(x: CycloNumber, digits: int) -> mpmath.mpc:
    """Floating-point embedding sum_e c_e * exp(2*pi*i*e/n).

    Deterministic; computed with 10 guard digits so the error is far below
    the promised 10^(-digits+2) bound.
    """
    if not isinstance(digits, int) or digits < 1:
        raise ValueError(f"digits must be a positive integer, got {digits!r}")
    with mpmath.workdps(digits + 10):
        total = mpmath.mpc(0)
        for e, c in x._num.items():
            total += c * mpmath.expjpi(mpmath.mpf(2 * e) / x._order)
        return total / x._den


class RationalPhase:
    """An exact rational number modulo 1; the storage type for T-phases."""

    __slots__ = ("_value",)

    def __init__(self, value):
        if isinstance(value, RationalPhase):
            self._value = value._value
        else:
            self._value = Fraction(value) % 1

    @property
    def value(self) -> Fraction:
        return self._value

    def __eq__(self, other):
        if isinstance(other, RationalPhase):
            return self._value == other._value
        if isinstance(other, (int, Fraction)):
            return self._value == Fraction(other) % 1
        return NotImplemented

    def __hash__(self):
        return hash(("RationalPhase", self._value))

    def __add__(self, other):
        if not isinstance(other, (RationalPhase, int, Fraction)):
            return NotImplemented
        o = other._value if isinstance(other, RationalPhase) else Fraction(other)
        return RationalPhase(self._value + o)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (RationalPhase, int, Fraction)):
            return NotImplemented
        o = other._value if isinstance(other, RationalPhase) else Fraction(other)
        return RationalPhase(self._value - o)

    def __neg__(self):
        return RationalPhase(-self._value)

    def __str__(self):
        return str(self._value)

    def __repr__(self):
        return f"RationalPhase({self._value})"
