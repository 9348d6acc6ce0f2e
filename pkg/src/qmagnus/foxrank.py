"""Fox calculus, matrices over group algebras, and finite-level ranks.

A matrix over F_p[G] is pushed to the finite quotient Q = image of G by
replacing every entry u with the F_p-matrix of right multiplication by u on
F_p[Q]. With that convention the induced map is multiplicative, so the
normalised ranks ``rank / |Q|`` behave like a Sylvester matrix rank
function.

``beta1_sequence`` computes dim H_1(G_n; F_p) for the kernels G_n from the
presentation complex of the cover,

    F_p[Q]^R --(Fox Jacobian)--> F_p[Q]^X --(x_i - 1)--> F_p[Q],

so ``h1 = |X||Q| - rank d1 - rank d2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import random
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import RelatorViolation
from .pquot import (
    DEFAULT_CAP,
    QuotientHom,
    build_quotient,
    check_density,
    check_relators,
    hom_from_words,
)
from . import wordexpr as W

__all__ = [
    "Presentation",
    "GroupRingElem",
    "GroupRingMatrix",
    "FpMatrix",
    "RankReport",
    "LevelRecord",
    "Beta1Report",
    "AxiomSuiteResult",
    "fox_derivative",
    "fox_jacobian",
    "induce_matrix",
    "rank_fp",
    "sylvester_rank",
    "beta1_sequence",
    "sylvester_axiom_suite",
    "ambient_rank_of",
]


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        rels = []
        for r in self.relators:
            if isinstance(r, str):
                r = W.parse(r, gens)
            letters = W.free_reduce(r)
            if not letters:
                raise ValueError("relators must be nontrivial after free reduction")
            if any(g not in gens for g, _ in letters):
                raise ValueError(f"relator {W.letters_to_text(letters)} uses unknown generators")
            rels.append(letters)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    def relator_texts(self) -> list:
        return [W.letters_to_text(r) for r in self.relators]


# ---------------------------------------------------------------------------
# Group ring elements over the free group


class GroupRingElem:
    """Finite F_p-combination of freely reduced words (p = 0 means integers)."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping | None = None):
        self.p = p
        acc: dict = {}
        for w, c in (terms or {}).items():
            w = W.free_reduce(tuple(w))
            acc[w] = acc.get(w, 0) + c
        self.terms = {w: self._red(c) for w, c in acc.items() if self._red(c)}

    def _red(self, c):
        return c % self.p if self.p else c

    @classmethod
    def word(cls, p: int, letters=(), coeff: int = 1) -> "GroupRingElem":
        return cls(p, {tuple(letters): coeff})

    @classmethod
    def zero(cls, p: int) -> "GroupRingElem":
        return cls(p)

    @classmethod
    def one(cls, p: int) -> "GroupRingElem":
        return cls.word(p, ())

    def _check(self, other):
        if not isinstance(other, GroupRingElem) or other.p != self.p:
            raise TypeError("group ring elements over different coefficients")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, 0) + c
        return GroupRingElem(self.p, acc)

    def __neg__(self):
        return GroupRingElem(self.p, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElem(self.p, {w: c * other for w, c in self.terms.items()})
        self._check(other)
        acc: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = W.free_reduce(u + v)
                acc[w] = acc.get(w, 0) + a * b
        return GroupRingElem(self.p, acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def augmentation(self) -> int:
        return self._red(sum(self.terms.values()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"{c}*({W.letters_to_text(w)})" for w, c in sorted(self.terms.items())
        )


def fox_derivative(w, x: str, p: int = 0) -> GroupRingElem:
    """The Fox derivative d w / d x in the free group ring."""
    letters = W.free_reduce(w if isinstance(w, tuple) else _word(w))
    acc: dict = {}
    prefix: list = []
    for g, e in letters:
        if g == x:
            if e == 1:
                key = W.free_reduce(tuple(prefix))
                acc[key] = acc.get(key, 0) + 1
            else:
                key = W.free_reduce(tuple(prefix) + ((g, -1),))
                acc[key] = acc.get(key, 0) - 1
        prefix.append((g, e))
    return GroupRingElem(p, acc)


def _word(w):
    return W.parse(w) if isinstance(w, str) else w


# ---------------------------------------------------------------------------
# Matrices


class GroupRingMatrix:
    def __init__(self, p: int, rows: Sequence[Sequence[GroupRingElem]], ncols: int | None = None):
        self.p = p
        self.rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("matrix rows must have equal length")
        self.ncols = ncols

    @property
    def shape(self) -> tuple:
        return len(self.rows), self.ncols

    @classmethod
    def zeros(cls, p: int, r: int, c: int) -> "GroupRingMatrix":
        return cls(p, [[GroupRingElem.zero(p) for _ in range(c)] for _ in range(r)], c)

    @classmethod
    def identity(cls, p: int, k: int) -> "GroupRingMatrix":
        m = cls.zeros(p, k, k)
        for i in range(k):
            m.rows[i][i] = GroupRingElem.one(p)
        return m

    def __matmul__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        r, k = self.shape
        k2, c = other.shape
        if k != k2:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = GroupRingMatrix.zeros(self.p, r, c)
        for i in range(r):
            for j in range(c):
                acc = GroupRingElem.zero(self.p)
                for t in range(k):
                    if self.rows[i][t] and other.rows[t][j]:
                        acc = acc + self.rows[i][t] * other.rows[t][j]
                out.rows[i][j] = acc
        return out

    @staticmethod
    def block(top_left, top_right, bottom_left, bottom_right) -> "GroupRingMatrix":
        p = top_left.p
        rows = [a + b for a, b in zip(top_left.rows, top_right.rows)]
        rows += [a + b for a, b in zip(bottom_left.rows, bottom_right.rows)]
        return GroupRingMatrix(p, rows, top_left.ncols + top_right.ncols)

    @classmethod
    def block_diag(cls, m1, m2) -> "GroupRingMatrix":
        (r1, c1), (r2, c2) = m1.shape, m2.shape
        return cls.block(m1, cls.zeros(m1.p, r1, c2), cls.zeros(m1.p, r2, c1), m2)

    @classmethod
    def block_upper(cls, m1, m3, m2) -> "GroupRingMatrix":
        r2, c1 = m2.shape[0], m1.shape[1]
        return cls.block(m1, m3, cls.zeros(m1.p, r2, c1), m2)


def fox_jacobian(P: Presentation, p: int) -> GroupRingMatrix:
    rows = [[fox_derivative(r, x, p) for x in P.generators] for r in P.relators]
    return GroupRingMatrix(p, rows, len(P.generators))


@dataclass
class FpMatrix:
    """Sparse matrix over F_p; ``rows[i]`` maps column -> nonzero value."""

    p: int
    nrows: int
    ncols: int
    rows: list

    @classmethod
    def from_dense(cls, a, p: int) -> "FpMatrix":
        a = np.asarray(a, dtype=np.int64) % p
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows = [{int(j): int(a[i, j]) for j in np.flatnonzero(a[i])} for i in range(a.shape[0])]
        return cls(p, a.shape[0], a.shape[1], rows)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                out[i, j] = v
        return out


def induce_matrix(M: GroupRingMatrix, h: QuotientHom, check: bool = True) -> FpMatrix:
    """Expand every entry of M through the right-regular representation of the image."""
    if check:
        ok, bad = check_relators(h)
        if not ok:
            raise RelatorViolation(W.letters_to_text(bad), h.quotient.n)
    p = h.quotient.p
    if M.p != p:
        raise ValueError(f"matrix is over F_{M.p}, quotient over F_{p}")
    m = h.order
    r, c = M.shape
    rows = [dict() for _ in range(r * m)]
    tables: dict = {}
    for i, mrow in enumerate(M.rows):
        for j, u in enumerate(mrow):
            for w, coeff in u.terms.items():
                t = tables.get(w)
                if t is None:
                    t = tables[w] = h.translate(w)
                base_col = j * m
                for q in range(m):
                    row = rows[i * m + q]
                    col = base_col + int(t[q])
                    v = (row.get(col, 0) + coeff) % p
                    if v:
                        row[col] = v
                    else:
                        row.pop(col, None)
    return FpMatrix(p, r * m, c * m, rows)


def rank_fp(M, p: int | None = None) -> int:
    """Exact rank over F_p by sparse row elimination.

    Accepts an :class:`FpMatrix` or anything numpy can turn into a 2-d
    integer array (then ``p`` is required).
    """
    if not isinstance(M, FpMatrix):
        if p is None:
            raise ValueError("p is required for dense input")
        M = FpMatrix.from_dense(M, p)
    p = M.p
    pivots: dict = {}
    for src in M.rows:
        row = {c: v % p for c, v in src.items() if v % p}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in row.items()}
                break
            f = row[c]
            for k, v in piv.items():
                nv = (row.get(k, 0) - f * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(pivots)


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class RankReport:
    level: int
    order: int
    index: int
    raw_rank: int
    rank: Fraction

    def to_json(self) -> dict:
        return {
            "n": self.level,
            "order": self.order,
            "index": self.index,
            "raw_rank": self.raw_rank,
            "rank": str(self.rank),
        }


def sylvester_rank(M: GroupRingMatrix, h: QuotientHom, check: bool = True) -> RankReport:
    raw = rank_fp(induce_matrix(M, h, check=check))
    return RankReport(h.quotient.n, h.quotient.order, h.order, raw, Fraction(raw, h.order))


@dataclass(frozen=True)
class LevelRecord:
    n: int
    order: int
    index: int
    h1: int
    b: Fraction
    dense: bool
    lower_bound_ok: bool | None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "order": self.order,
            "index": self.index,
            "h1": self.h1,
            "b": str(self.b),
            "dense": self.dense,
            "lower_bound_ok": self.lower_bound_ok,
        }


@dataclass
class Beta1Report:
    p: int
    ambient_rank: int
    levels: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema": "v1",
            "p": self.p,
            "ambient_rank": self.ambient_rank,
            "levels": [r.to_json() for r in self.levels],
        }


def ambient_rank_of(rho: Mapping) -> int:
    top = 0
    for w in rho.values():
        ast = W.parse(w) if isinstance(w, str) else w
        for g in W.generators_of(ast):
            if not (g.startswith("x") and g[1:].isdigit()):
                raise ValueError(f"ambient generators are x1..xd, got {g!r}")
            top = max(top, int(g[1:]))
    return max(top, 1)


def boundary_matrices(P: Presentation, p: int) -> tuple:
    """(d2, d1) over F_p[G]: the Fox Jacobian and the column (x_i - 1)."""
    d1 = GroupRingMatrix(
        p,
        [[GroupRingElem.word(p, ((x, 1),)) - GroupRingElem.one(p)] for x in P.generators],
        1,
    )
    return fox_jacobian(P, p), d1


def h1_at(P: Presentation, h: QuotientHom) -> int:
    """dim_{F_p} H_1(kernel of G -> image; F_p)."""
    p = h.quotient.p
    d2, d1 = boundary_matrices(P, p)
    r1 = rank_fp(induce_matrix(d1, h, check=False))
    r2 = rank_fp(induce_matrix(d2, h, check=False)) if P.relators else 0
    return len(P.generators) * h.order - r1 - r2


def beta1_sequence(
    P: Presentation,
    rho: Mapping,
    p: int,
    levels: Iterable[int],
    ambient_rank: int | None = None,
    cap: int = DEFAULT_CAP,
    commutative: bool = False,
    on_level: Callable | None = None,
) -> Beta1Report:
    """Normalised first mod-p Betti numbers b_n = dim H_1(G_n; F_p) / |G : G_n|."""
    d = ambient_rank if ambient_rank is not None else ambient_rank_of(rho)
    report = Beta1Report(p, d)
    for n in levels:
        Q = build_quotient(p, d, n, cap=cap, commutative=commutative)
        h = hom_from_words(rho, Q, P.generators, P.relators)
        ok, bad = check_relators(h)
        if not ok:
            raise RelatorViolation(W.letters_to_text(bad), n)
        h1 = h1_at(P, h)
        b = Fraction(h1, h.order)
        dense = check_density(h)
        # the bound needs a free pro-p closure, so not on the commutative chain
        bound = None
        if dense and not commutative:
            bound = b >= (d - 1) + Fraction(1, h.order)
        rec = LevelRecord(n, Q.order, h.order, h1, b, dense, bound)
        report.levels.append(rec)
        if on_level is not None:
            on_level(rec)
    return report


# ---------------------------------------------------------------------------
# Sylvester axioms


@dataclass(frozen=True)
class AxiomSuiteResult:
    passed: bool
    checks: int
    counterexample: dict | None = None


def _random_elem(rng: random.Random, p: int, gens: Sequence[str], max_support: int,
                 max_len: int) -> GroupRingElem:
    if rng.random() < 0.25:
        return GroupRingElem.zero(p)
    terms: dict = {}
    for _ in range(rng.randint(1, max_support)):
        letters = tuple(
            (rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randint(0, max_len))
        )
        terms[letters] = terms.get(letters, 0) + rng.randrange(1, p)
    return GroupRingElem(p, terms)


def _random_matrix(rng, p, gens, r, c, max_support, max_len) -> GroupRingMatrix:
    if rng.random() < 0.3 and r and c:
        # low-rank products make SMat2 less trivial
        k = rng.randint(1, max(1, min(r, c) - 1))
        a = _random_matrix(rng, p, gens, r, k, max_support, 1)
        b = _random_matrix(rng, p, gens, k, c, max_support, 1)
        return a @ b
    return GroupRingMatrix(
        p,
        [[_random_elem(rng, p, gens, max_support, max_len) for _ in range(c)] for _ in range(r)],
        c,
    )


def sylvester_axiom_suite(
    h: QuotientHom,
    trials: int = 20,
    max_size: int = 3,
    seed: int = 0,
    max_support: int = 3,
    max_word_len: int = 3,
) -> AxiomSuiteResult:
    """Check (SMat1)-(SMat4) for rk_n on seeded random matrices over F_p[image]."""
    p = h.quotient.p
    gens = h.generators
    rng = random.Random(seed)

    def rk(M):
        return sylvester_rank(M, h, check=False).rank

    checks = 0
    if rk(GroupRingMatrix.identity(p, 1)) != 1:
        return AxiomSuiteResult(False, 1, {"axiom": "SMat1", "case": "rk(1) != 1"})
    for r, c in ((1, 1), (2, 3), (3, 1)):
        checks += 1
        if rk(GroupRingMatrix.zeros(p, r, c)) != 0:
            return AxiomSuiteResult(False, checks, {"axiom": "SMat1", "shape": (r, c)})

    def dims():
        return rng.randint(1, max_size)

    for trial in range(trials):
        a, b, c, e = dims(), dims(), dims(), dims()
        M1 = _random_matrix(rng, p, gens, a, b, max_support, max_word_len)
        M2 = _random_matrix(rng, p, gens, b, c, max_support, max_word_len)
        r1, r2 = rk(M1), rk(M2)
        prod = rk(M1 @ M2)
        checks += 1
        if prod > min(r1, r2):
            return AxiomSuiteResult(False, checks, {
                "axiom": "SMat2", "trial": trial, "rk_product": str(prod),
                "rk1": str(r1), "rk2": str(r2)})
        N2 = _random_matrix(rng, p, gens, c, e, max_support, max_word_len)
        rn = rk(N2)
        diag = rk(GroupRingMatrix.block_diag(M1, N2))
        checks += 1
        if diag != r1 + rn:
            return AxiomSuiteResult(False, checks, {
                "axiom": "SMat3", "trial": trial, "rk_diag": str(diag),
                "sum": str(r1 + rn)})
        M3 = _random_matrix(rng, p, gens, a, e, max_support, max_word_len)
        upper = rk(GroupRingMatrix.block_upper(M1, M3, N2))
        checks += 1
        if upper < r1 + rn:
            return AxiomSuiteResult(False, checks, {
                "axiom": "SMat4", "trial": trial, "rk_upper": str(upper),
                "sum": str(r1 + rn)})
    return AxiomSuiteResult(True, checks)
