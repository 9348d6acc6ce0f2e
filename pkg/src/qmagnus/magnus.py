"""Magnus representation of words and a nontriviality certifier.

Generator ``x_i`` maps to ``1 + y_i``; powers with rational or p-adic
exponents go through the binomial series. A word whose image differs from
1 below degree n survives in the class-n nilpotent quotient, and that is
what a :class:`Certificate` records. Triviality is never certified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import re
from typing import Sequence

from .scalars import QQ
from .series import SeriesRing, TruncatedSeries
from . import wordexpr as W

__all__ = [
    "MagnusContext",
    "Certificate",
    "Inconclusive",
    "NilpotenceWitness",
    "evaluate",
    "certify_nontrivial",
    "default_schedule",
    "nilpotence_witness",
]


@dataclass(frozen=True)
class MagnusContext:
    d: int
    N: int
    domain: object = QQ
    names: tuple = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(
                self, "names", tuple(f"x{i + 1}" for i in range(self.d))
            )
        if len(self.names) != self.d:
            raise ValueError("need exactly d generator names")

    @property
    def ring(self) -> SeriesRing:
        return SeriesRing(self.d, self.N, self.domain)

    @property
    def p(self) -> int:
        return self.domain.p

    def with_N(self, N: int) -> "MagnusContext":
        return MagnusContext(self.d, N, self.domain, self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(
                f"generator {name!r} is not one of {', '.join(self.names)}"
            ) from None


def evaluate(w, ctx: MagnusContext) -> TruncatedSeries:
    """Image of the word ``w`` (AST or text) in 1 + Delta, truncated at ctx.N."""
    if isinstance(w, str):
        w = W.parse(w, ctx.names)
    ring = ctx.ring
    cache: dict = {}

    def go(node):
        hit = cache.get(node)
        if hit is not None:
            return hit
        if isinstance(node, W.Gen):
            out = ring.generator(ctx.index(node.name))
        elif isinstance(node, W.Product):
            out = ring.one()
            for f in node.factors:
                out = out * go(f)
        elif isinstance(node, W.Power):
            base = go(node.base)
            e = node.exponent
            if e == -1:
                out = base.invert_unit()
            else:
                out = base.binomial_power(e)
        else:
            u, v = go(node.u), go(node.v)
            out = u * v * u.invert_unit() * v.invert_unit()
        cache[node] = out
        return out

    return go(w)


@dataclass(frozen=True)
class Certificate:
    """``w`` is nontrivial modulo degree ``degree + 1``.

    ``component`` is the lowest homogeneous part of phi(w) - 1, stored in the
    ring truncated at ``degree + 1``.
    """

    source: str
    degree: int
    component: TruncatedSeries
    domain: object

    def to_json(self) -> dict:
        return {
            "schema": "v1",
            "result": "certificate",
            "expr": self.source,
            "degree": self.degree,
            "component": self.component.to_json(),
        }


@dataclass(frozen=True)
class Inconclusive:
    source: str
    max_degree: int
    schedule: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "schema": "v1",
            "result": "inconclusive",
            "expr": self.source,
            "max_degree": self.max_degree,
            "schedule": list(self.schedule),
        }


def default_schedule(n_max: int = 16) -> list:
    out = []
    n = 2
    while n < n_max:
        out.append(n)
        n *= 2
    out.append(n_max)
    return out


def certify_nontrivial(
    w,
    d: int | None = None,
    domain=QQ,
    schedule: Sequence[int] | None = None,
    n_max: int = 16,
    names: Sequence[str] | None = None,
):
    """Search for a degree at which phi(w) differs from 1.

    Returns a :class:`Certificate` for the first truncation in ``schedule``
    that detects nontriviality, otherwise :class:`Inconclusive`.
    """
    if isinstance(w, str):
        source = w
        ast = W.parse(w, names)
    else:
        ast = w
        source = W.to_text(w)
    if names is None:
        names = default_names(ast, d)
    names = tuple(names)
    if not names:
        names = ("x1",)
    sched = list(schedule) if schedule is not None else default_schedule(n_max)
    if not sched:
        raise ValueError("degree schedule must be nonempty")
    if any(b <= a for a, b in zip(sched, sched[1:])):
        raise ValueError("degree schedule must be strictly increasing")
    for N in sched:
        ctx = MagnusContext(len(names), N, domain, names)
        found = (evaluate(ast, ctx) - 1).lowest_term()
        if found is not None:
            degree, comp = found
            comp = comp.truncate(degree + 1)
            return Certificate(source, degree, comp, domain)
    return Inconclusive(source, sched[-1], tuple(sched))


def _natural_key(name: str):
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return (head, int(tail) if tail else -1)


def default_names(ast, d: int | None = None) -> tuple:
    """x1..xd when the word uses the standard names, else its sorted generators."""
    used = W.generators_of(ast)
    if d is not None:
        return tuple(f"x{i + 1}" for i in range(d))
    if all(re.fullmatch(r"x[1-9][0-9]*", g) for g in used):
        top = max((int(g[1:]) for g in used), default=1)
        return tuple(f"x{i + 1}" for i in range(top))
    return tuple(sorted(used, key=_natural_key))


@dataclass(frozen=True)
class NilpotenceWitness:
    nilpotency_class: int
    truncation: int
    description: str


def nilpotence_witness(cert: Certificate) -> NilpotenceWitness:
    n = cert.degree
    if n == 1:
        desc = (
            "nontrivial in the abelianization: the image in "
            "1+Delta/(1+Delta^2) is not 1"
        )
    else:
        desc = (
            f"nontrivial in the class-{n} nilpotent quotient: the image in "
            f"1+Delta/(1+Delta^{n + 1}) is not 1"
        )
    return NilpotenceWitness(n, n + 1, desc)
