"""Exact coefficient domains and the binomial operator C(a, n).

Three kinds of scalar are supported:

* rationals, represented by :class:`fractions.Fraction` (always reduced);
* elements of a prime field, :class:`PrimeFieldElem`;
* p-adic integers known modulo p**k, :class:`TruncatedPadic`.

Series code does not carry these wrappers around. It stores raw Python
numbers and delegates normalisation to a *domain* object
(:class:`RationalField` or :class:`ResidueRing`), which also knows how to
turn an exponent into the binomial coefficients that drive
``(1 + f)**a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import re

from .errors import DomainMismatch, NotInvertible, PrecisionExhausted

__all__ = [
    "is_prime",
    "legendre_valuation",
    "valuation",
    "PrimeFieldElem",
    "TruncatedPadic",
    "binomial",
    "RationalField",
    "ResidueRing",
    "QQ",
    "GF",
    "Zmod",
    "domain_from_json",
    "parse_scalar",
    "rational_to_json",
    "rational_from_json",
]


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def legendre_valuation(n: int, p: int) -> int:
    """Return v_p(n!) = sum of floor(n / p**i) over i >= 1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    total = 0
    q = n // p
    while q:
        total += q
        q //= p
    return total


def valuation(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Wrapped scalars


@dataclass(frozen=True)
class PrimeFieldElem:
    p: int
    value: int

    def __post_init__(self):
        _check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldElem):
            if other.p != self.p:
                raise DomainMismatch(f"F_{self.p} vs F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise NotInvertible(f"{other} has no image in F_{self.p}")
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem(self.p, self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem(self.p, self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem(self.p, o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem(self.p, self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElem(self.p, -self.value)

    def inverse(self) -> "PrimeFieldElem":
        if self.value == 0:
            raise NotInvertible(f"0 is not invertible in F_{self.p}")
        return PrimeFieldElem(self.p, pow(self.value, -1, self.p))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * PrimeFieldElem(self.p, o).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem(self.p, o) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.value))

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


@dataclass(frozen=True)
class TruncatedPadic:
    """A p-adic integer known modulo ``p**k``.

    Results of arithmetic carry the smaller operand precision; division by
    an element of valuation v costs v further digits.
    """

    p: int
    k: int
    value: int

    def __post_init__(self):
        _check_prime(self.p)
        if self.k < 1:
            raise PrecisionExhausted(f"precision {self.k} < 1", required=1)
        object.__setattr__(self, "value", self.value % self.p**self.k)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    @classmethod
    def from_rational(cls, x, p: int, k: int) -> "TruncatedPadic":
        x = Fraction(x)
        if x.denominator % p == 0:
            raise NotInvertible(f"{x} is not a {p}-adic integer")
        m = p**k
        return cls(p, k, x.numerator * pow(x.denominator, -1, m))

    def _coerce(self, other) -> "TruncatedPadic":
        if isinstance(other, TruncatedPadic):
            if other.p != self.p:
                raise DomainMismatch(f"Z_{self.p} vs Z_{other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            # exact inputs never limit precision
            return TruncatedPadic.from_rational(other, self.p, self.k)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, min(self.k, o.k), self.value + o.value)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPadic(self.p, self.k, -self.value)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, min(self.k, o.k), self.value - o.value)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, min(self.k, o.k), self.value * o.value)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def inverse(self) -> "TruncatedPadic":
        return TruncatedPadic(self.p, self.k, 1) / self

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        k = min(self.k, o.k)
        if o.value == 0:
            raise PrecisionExhausted(
                f"divisor is 0 modulo {self.p}^{o.k}; its valuation is unknown"
            )
        v = valuation(o.value, self.p)
        out = k - v
        if out < 1:
            raise PrecisionExhausted(
                f"division by an element of valuation {v} leaves no digits",
                required=v + 1,
            )
        pv = self.p**v
        if self.value % pv != 0:
            raise NotInvertible("quotient is not a p-adic integer")
        m = self.p**out
        unit = (o.value // pv) % m
        return TruncatedPadic(self.p, out, (self.value // pv) * pow(unit, -1, m))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def reduce(self, k: int) -> "TruncatedPadic":
        """Forget digits: the same number known only modulo p**k."""
        if k > self.k:
            raise PrecisionExhausted(
                f"cannot raise precision from {self.k} to {k}", required=k
            )
        return TruncatedPadic(self.p, k, self.value)

    def congruent(self, other: "TruncatedPadic") -> bool:
        """Equality modulo the smaller of the two precisions."""
        m = self.p ** min(self.k, other.k)
        return (self.value - other.value) % m == 0

    def __repr__(self):
        return f"Zp({self.value};{self.k}) [p={self.p}]"

    def to_json(self) -> dict:
        return {"v": str(self.value), "k": self.k}

    @classmethod
    def from_json(cls, obj: dict, p: int) -> "TruncatedPadic":
        return cls(p, int(obj["k"]), int(obj["v"]))


# ---------------------------------------------------------------------------
# Binomial coefficients


def _rational_binomial(a: Fraction, n: int) -> Fraction:
    num = Fraction(1)
    for i in range(n):
        num *= a - i
    return num / math.factorial(n)


def _binomial_mod(value: int, n: int, modulus: int) -> int:
    # value is a non-negative integer representative; n! divides the product
    fact = math.factorial(n)
    big = fact * modulus
    prod = 1
    for i in range(n):
        prod = prod * (value - i) % big
    return (prod // fact) % modulus


def binomial(a, n: int):
    """C(a, n) = a (a-1) ... (a-n+1) / n! computed in the domain of ``a``.

    ``a`` may be an ``int``/``Fraction`` (result is a ``Fraction``), a
    :class:`PrimeFieldElem` (only for ``n < p``) or a
    :class:`TruncatedPadic` (result has precision ``k - v_p(n!)``).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if isinstance(a, (int, Fraction)):
        return _rational_binomial(Fraction(a), n)
    if isinstance(a, PrimeFieldElem):
        if n >= a.p:
            raise NotInvertible(
                f"C(a, {n}) in F_{a.p} divides by p; lift the exponent to a "
                "TruncatedPadic instead"
            )
        num = 1
        for i in range(n):
            num = num * (a.value - i) % a.p
        return PrimeFieldElem(a.p, num * pow(math.factorial(n), -1, a.p))
    if isinstance(a, TruncatedPadic):
        loss = legendre_valuation(n, a.p)
        out = a.k - loss
        if out < 1:
            raise PrecisionExhausted(
                f"C(a, {n}) needs precision > {loss}, exponent has {a.k}",
                required=loss + 1,
            )
        return TruncatedPadic(a.p, out, _binomial_mod(a.value, n, a.p**out))
    raise TypeError(f"unsupported scalar {a!r}")


# ---------------------------------------------------------------------------
# Coefficient domains used by the series ring


def rational_to_json(x) -> str:
    return str(Fraction(x))


def rational_from_json(s: str) -> Fraction:
    return Fraction(s)


class RationalField:
    """The field Q; coefficients are ``Fraction`` instances."""

    tag = "q"
    p = 0
    k = 0
    characteristic = 0

    def reduce(self, x):
        return Fraction(x)

    def is_unit(self, x) -> bool:
        return x != 0

    def inv(self, x):
        if x == 0:
            raise NotInvertible("division by zero in Q")
        return 1 / Fraction(x)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise DomainMismatch(f"cannot place {x!r} in Q")

    def binomial_coefficients(self, a, n_max: int) -> list:
        """[C(a, 0), ..., C(a, n_max)] as domain elements."""
        if isinstance(a, TruncatedPadic):
            raise DomainMismatch("p-adic exponents have no meaning over Q")
        if isinstance(a, PrimeFieldElem):
            raise DomainMismatch("F_p exponents have no meaning over Q")
        a = Fraction(a)
        out = [Fraction(1)]
        c = Fraction(1)
        for n in range(1, n_max + 1):
            c = c * (a - n + 1) / n
            out.append(c)
        return out

    def required_precision(self, n_max: int) -> int:
        return 0

    def to_json_coeff(self, c) -> str:
        return str(c)

    def from_json_coeff(self, s):
        return Fraction(s)

    def to_json(self) -> dict:
        return {"domain": "q"}

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("q")

    def __repr__(self):
        return "QQ"


class ResidueRing:
    """The ring Z/p^k (a field when k == 1); coefficients are ints in [0, p^k)."""

    def __init__(self, p: int, k: int = 1):
        _check_prime(p)
        if k < 1:
            raise ValueError("k must be >= 1")
        self.p = p
        self.k = k
        self.modulus = p**k
        self.characteristic = self.modulus
        self.tag = "fp" if k == 1 else "zpk"

    def reduce(self, x) -> int:
        return x % self.modulus

    def is_unit(self, x) -> bool:
        return x % self.p != 0

    def inv(self, x) -> int:
        if x % self.p == 0:
            raise NotInvertible(f"{x} is not a unit modulo {self.p}^{self.k}")
        return pow(x, -1, self.modulus)

    def coerce(self, x) -> int:
        if isinstance(x, int):
            return x % self.modulus
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise NotInvertible(
                    f"denominator of {x} is not invertible modulo {self.p}"
                )
            return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
        if isinstance(x, PrimeFieldElem):
            if x.p != self.p or self.k != 1:
                raise DomainMismatch(f"cannot place {x!r} in {self!r}")
            return x.value
        if isinstance(x, TruncatedPadic):
            if x.p != self.p:
                raise DomainMismatch(f"cannot place {x!r} in {self!r}")
            if x.k < self.k:
                raise PrecisionExhausted(
                    f"value known mod {self.p}^{x.k}, need {self.p}^{self.k}",
                    required=self.k,
                )
            return x.value % self.modulus
        raise DomainMismatch(f"cannot place {x!r} in {self!r}")

    def required_precision(self, n_max: int) -> int:
        """Exponent precision needed for C(a, n), n <= n_max, to land here."""
        return self.k + legendre_valuation(n_max, self.p)

    def binomial_coefficients(self, a, n_max: int) -> list:
        if isinstance(a, TruncatedPadic):
            if a.p != self.p:
                raise DomainMismatch(f"{a!r} is not a {self.p}-adic exponent")
            need = self.required_precision(n_max)
            if a.k < need:
                raise PrecisionExhausted(
                    f"exponent known mod {a.p}^{a.k}; degree {n_max} needs "
                    f"precision {need}",
                    required=need,
                )
            return [self.coerce(binomial(a, n)) for n in range(n_max + 1)]
        if isinstance(a, PrimeFieldElem):
            raise DomainMismatch(
                "F_p exponents are ambiguous; supply a TruncatedPadic"
            )
        a = Fraction(a)
        if a.denominator % self.p == 0:
            raise NotInvertible(
                f"exponent {a} has denominator divisible by {self.p}"
            )
        # C(a, n) lies in Z_(p), so exact rational values reduce cleanly
        return [self.coerce(c) for c in RationalField().binomial_coefficients(a, n_max)]

    def to_json_coeff(self, c) -> str:
        return str(c)

    def from_json_coeff(self, s) -> int:
        return int(s) % self.modulus

    def to_json(self) -> dict:
        out = {"domain": self.tag, "p": self.p}
        if self.k != 1:
            out["k"] = self.k
        return out

    def __eq__(self, other):
        return isinstance(other, ResidueRing) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def __repr__(self):
        return f"GF({self.p})" if self.k == 1 else f"Zmod({self.p}^{self.k})"


QQ = RationalField()


def GF(p: int) -> ResidueRing:
    return ResidueRing(p, 1)


def Zmod(p: int, k: int) -> ResidueRing:
    return ResidueRing(p, k)


def domain_from_json(obj: dict):
    tag = obj.get("domain", "q")
    if tag == "q":
        return QQ
    if tag == "fp":
        return GF(int(obj["p"]))
    if tag == "zpk":
        return Zmod(int(obj["p"]), int(obj["k"]))
    raise ValueError(f"unknown domain tag {tag!r}")


_INT = re.compile(r"^-?[0-9]+$")
_RAT = re.compile(r"^(-?[0-9]+)/([0-9]+)$")
_PADIC = re.compile(r"^Zp\((-?[0-9]+);([0-9]+)\)$")


def parse_scalar(text: str, p: int | None = None):
    """Parse an integer, ``n/d`` rational, or ``Zp(v;k)`` p-adic literal."""
    text = text.strip()
    if _INT.match(text):
        return int(text)
    m = _RAT.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise NotInvertible("zero denominator")
        return Fraction(int(m.group(1)), den)
    m = _PADIC.match(text)
    if m:
        if p is None:
            raise ValueError("p-adic literal needs a prime from context")
        return TruncatedPadic(p, int(m.group(2)), int(m.group(1)))
    raise ValueError(f"not a scalar literal: {text!r}")
