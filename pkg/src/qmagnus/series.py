"""Truncated noncommutative power series A<<y_1, ..., y_d>> / (degree >= N).

A series is a sparse map from monomials (tuples of generator indices) to
nonzero coefficients. The truncation bound ``N`` belongs to the ring, so
mixing series with different bounds is an error rather than a silent loss
of precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DomainMismatch, NotInvertible
from .scalars import QQ, PrimeFieldElem, TruncatedPadic, domain_from_json

__all__ = ["SeriesRing", "TruncatedSeries", "monomial_key"]


def monomial_key(mon: tuple) -> tuple:
    """Graded lexicographic order."""
    return (len(mon), mon)


@dataclass(frozen=True)
class SeriesRing:
    d: int
    N: int
    domain: object = QQ

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("need at least one indeterminate")
        if self.N < 1:
            raise ValueError("truncation bound N must be >= 1")

    def zero(self) -> "TruncatedSeries":
        return TruncatedSeries(self, {})

    def one(self) -> "TruncatedSeries":
        return self.scalar(1)

    def scalar(self, c) -> "TruncatedSeries":
        return TruncatedSeries(self, {(): self.domain.coerce(c)})

    def y(self, i: int) -> "TruncatedSeries":
        """The indeterminate y_i (0-based)."""
        if not 0 <= i < self.d:
            raise IndexError(f"indeterminate {i} out of range for d={self.d}")
        if self.N < 2:
            return self.zero()
        return TruncatedSeries(self, {(i,): self.domain.coerce(1)})

    def generator(self, i: int) -> "TruncatedSeries":
        """Magnus image 1 + y_i of the i-th free generator."""
        return self.one() + self.y(i)

    def from_terms(self, terms) -> "TruncatedSeries":
        """Build from ``{monomial: coeff}`` or an iterable of pairs."""
        items = terms.items() if hasattr(terms, "items") else terms
        acc: dict = {}
        for mon, c in items:
            mon = tuple(mon)
            if any(not 0 <= i < self.d for i in mon):
                raise IndexError(f"monomial {mon} uses an index >= d={self.d}")
            if len(mon) >= self.N:
                continue
            acc[mon] = acc.get(mon, 0) + self.domain.coerce(c)
        return TruncatedSeries._canonical(self, acc)

    def with_N(self, N: int) -> "SeriesRing":
        return SeriesRing(self.d, N, self.domain)

    def with_domain(self, domain) -> "SeriesRing":
        return SeriesRing(self.d, self.N, domain)


class TruncatedSeries:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: SeriesRing, terms: dict):
        # terms must already be canonical; use SeriesRing.from_terms otherwise
        self.ring = ring
        self.terms = terms
        self._hash = None

    @staticmethod
    def _canonical(ring: SeriesRing, acc: dict) -> "TruncatedSeries":
        red = ring.domain.reduce
        out = {}
        for mon, c in acc.items():
            c = red(c)
            if c:
                out[mon] = c
        return TruncatedSeries(ring, out)

    # -- basic protocol -----------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError(f"expected a TruncatedSeries, got {type(other).__name__}")
        if other.ring != self.ring:
            raise DomainMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.key()))
        return self._hash

    def key(self) -> tuple:
        """Canonical hashable form, sorted in graded lex order."""
        return tuple(sorted(self.terms.items(), key=lambda kv: monomial_key(kv[0])))

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self) -> Iterator:
        for mon in sorted(self.terms, key=monomial_key):
            yield mon, self.terms[mon]

    def __len__(self):
        return len(self.terms)

    def coefficient(self, mon) -> object:
        return self.terms.get(tuple(mon), 0)

    @property
    def constant(self):
        return self.terms.get((), 0)

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(()) == 1

    def degree_min(self) -> int | None:
        if not self.terms:
            return None
        return min(len(m) for m in self.terms)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        self._check(other)
        acc = dict(self.terms)
        for mon, c in other.terms.items():
            acc[mon] = acc.get(mon, 0) + c
        return TruncatedSeries._canonical(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._canonical(
            self.ring, {m: -c for m, c in self.terms.items()}
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "TruncatedSeries":
        s = self.ring.domain.coerce(s)
        return TruncatedSeries._canonical(
            self.ring, {m: s * c for m, c in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PrimeFieldElem, TruncatedPadic)):
            return self.scale(other)
        self._check(other)
        N = self.ring.N
        by_deg: dict = {}
        for mon, c in other.terms.items():
            by_deg.setdefault(len(mon), []).append((mon, c))
        degs = sorted(by_deg)
        acc: dict = {}
        for m1, c1 in self.terms.items():
            room = N - len(m1)
            for dg in degs:
                if dg >= room:
                    break
                for m2, c2 in by_deg[dg]:
                    m = m1 + m2
                    acc[m] = acc.get(m, 0) + c1 * c2
        return TruncatedSeries._canonical(self.ring, acc)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e):
        if isinstance(e, int) and e >= 0:
            out = self.ring.one()
            base = self
            while e:
                if e & 1:
                    out = out * base
                base = base * base
                e >>= 1
            return out
        return self.binomial_power(e)

    def invert_unit(self) -> "TruncatedSeries":
        """Multiplicative inverse via the Neumann series of the augmentation part."""
        dom = self.ring.domain
        c = self.constant
        if not c or not dom.is_unit(c):
            raise NotInvertible(f"constant term {c!r} is not a unit")
        cinv = dom.inv(c)
        # s = c (1 + g) with g of positive order; s^-1 = c^-1 sum (-g)^m
        g = (self - self.ring.scalar(c)).scale(cinv)
        neg_g = -g
        total = self.ring.one()
        term = self.ring.one()
        for _ in range(1, self.ring.N):
            term = term * neg_g
            if not term:
                break
            total = total + term
        return total.scale(cinv)

    def binomial_power(self, a) -> "TruncatedSeries":
        """``(1 + f)**a = 1 + sum C(a, n) f**n`` for a series with constant term 1.

        ``a`` may be an int, a Fraction, a TruncatedPadic or a PadicLiteral
        (bound to the ring's prime).
        """
        from .wordexpr import PadicLiteral

        if self.constant != 1:
            raise NotInvertible("binomial powers need constant term 1")
        dom = self.ring.domain
        if isinstance(a, PadicLiteral):
            if not dom.p:
                raise DomainMismatch("p-adic exponents have no meaning over Q")
            a = a.bind(dom.p)
        f = self - 1
        if not f:
            return self.ring.one()
        n_max = (self.ring.N - 1) // f.degree_min()
        if isinstance(a, int) and a >= 0:
            n_max = min(n_max, a)
        coeffs = dom.binomial_coefficients(a, n_max)
        total = self.ring.one()
        power = self.ring.one()
        for n in range(1, n_max + 1):
            power = power * f
            if not power:
                break
            if coeffs[n]:
                total = total + power.scale(coeffs[n])
        return total

    # -- truncation and inspection ---------------------------------------------

    def truncate(self, N: int) -> "TruncatedSeries":
        if N > self.ring.N:
            raise ValueError(f"cannot truncate to N'={N} > N={self.ring.N}")
        ring = self.ring.with_N(N)
        return TruncatedSeries(
            ring, {m: c for m, c in self.terms.items() if len(m) < N}
        )

    def lift(self, N: int) -> "TruncatedSeries":
        """Same coefficients viewed in a ring with a larger bound.

        Only meaningful for exact polynomials; used by tests and oracles.
        """
        if N < self.ring.N:
            raise ValueError("lift needs a larger bound")
        return TruncatedSeries(self.ring.with_N(N), dict(self.terms))

    def reduce_mod(self, domain) -> "TruncatedSeries":
        """Image under the coefficient map into ``domain``."""
        ring = self.ring.with_domain(domain)
        acc = {m: domain.coerce(c) for m, c in self.terms.items()}
        return TruncatedSeries._canonical(ring, acc)

    def homogeneous(self, degree: int) -> "TruncatedSeries":
        return TruncatedSeries(
            self.ring, {m: c for m, c in self.terms.items() if len(m) == degree}
        )

    def lowest_term(self):
        """``(degree, homogeneous component)`` of least degree, or None for 0."""
        dmin = self.degree_min()
        if dmin is None:
            return None
        return dmin, self.homogeneous(dmin)

    def abelianize(self) -> "TruncatedSeries":
        """Image in the commutative truncated polynomial ring (sorted monomials)."""
        acc: dict = {}
        for m, c in self.terms.items():
            s = tuple(sorted(m))
            acc[s] = acc.get(s, 0) + c
        return TruncatedSeries._canonical(self.ring, acc)

    # -- text and JSON ----------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mon, c in self:
            name = "*".join(f"y{i + 1}" for i in mon)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(name)
            else:
                parts.append(f"({c})*{name}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        out = {"d": self.ring.d, "N": self.ring.N}
        out.update(self.ring.domain.to_json())
        to_c = self.ring.domain.to_json_coeff
        out["terms"] = [{"mon": list(mon), "c": to_c(c)} for mon, c in self]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "TruncatedSeries":
        domain = domain_from_json(obj)
        ring = SeriesRing(int(obj["d"]), int(obj["N"]), domain)
        return ring.from_terms(
            (tuple(t["mon"]), domain.from_json_coeff(t["c"])) for t in obj["terms"]
        )
