"""Root and centralizer extensions of embedded presentations, and the
finite-level amalgam test on augmentation ideals.

An :class:`EmbeddedPresentation` is a finite presentation together with a
map ``rho`` sending each generator to a word in the ambient free
generators ``x1..xd``. Extensions add a generator whose image is a root
(or a p-adic power) of the image of an existing word.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import json
import math
import random
import re
from typing import Sequence

from .errors import ExtensionError, PrecisionExhausted, RelatorViolation
from .foxrank import Presentation, beta1_sequence
from .pquot import DEFAULT_CAP, build_quotient, check_relators, hom_from_words
from .scalars import is_prime, legendre_valuation
from . import wordexpr as W

__all__ = [
    "EmbeddedPresentation",
    "ExtensionSpec",
    "AmalgamReport",
    "ProbeRecord",
    "free_base",
    "extend_presentation",
    "build_tower",
    "is_proper_power",
    "suggest_lambda",
    "amalgam_check",
    "strong_embedding_probe",
]


def _ambient_names(d: int) -> tuple:
    return tuple(f"x{i + 1}" for i in range(d))


@dataclass(frozen=True)
class EmbeddedPresentation:
    presentation: Presentation
    rho: dict
    p: int
    ambient_rank: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        names = _ambient_names(self.ambient_rank)
        rho = {}
        for g in self.presentation.generators:
            if g not in self.rho:
                raise ValueError(f"rho has no image for generator {g!r}")
            w = self.rho[g]
            rho[g] = W.parse(w, names) if isinstance(w, str) else w
        object.__setattr__(self, "rho", rho)

    @property
    def generators(self) -> tuple:
        return self.presentation.generators

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "ambient_rank": self.ambient_rank,
            "generators": list(self.generators),
            "relators": self.presentation.relator_texts(),
            "rho": {g: W.to_text(self.rho[g]) for g in self.generators},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EmbeddedPresentation":
        P = Presentation(tuple(obj["generators"]), tuple(obj.get("relators", ())))
        return cls(P, dict(obj["rho"]), int(obj["p"]), int(obj["ambient_rank"]))

    @classmethod
    def load(cls, path) -> "EmbeddedPresentation":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def free_base(generators: Sequence[str], p: int) -> EmbeddedPresentation:
    """Free group on ``generators`` mapped identically onto x1..xd."""
    gens = tuple(generators)
    rho = {g: f"x{i + 1}" for i, g in enumerate(gens)}
    return EmbeddedPresentation(Presentation(gens), rho, p, len(gens))


@dataclass(frozen=True)
class ExtensionSpec:
    """``kind`` is ``"root"`` (needs ``m``) or ``"centralizer"`` (needs ``k``
    and one exponent per new generator in ``lambdas``)."""

    kind: str
    w: object
    m: int | None = None
    k: int | None = None
    new_gens: tuple = ()
    lambdas: tuple = ()

    @classmethod
    def from_json(cls, obj: dict) -> "ExtensionSpec":
        kind = obj["kind"]
        if kind == "root":
            gens = (obj.get("new_gen", "t"),)
            return cls("root", obj["w"], m=int(obj["m"]), new_gens=gens)
        if kind == "centralizer":
            k = int(obj.get("k", 1))
            gens = tuple(obj.get("new_gens", ()))
            lams = tuple(_parse_lambda(s) for s in obj.get("lambdas", ()))
            return cls("centralizer", obj["w"], k=k, new_gens=gens, lambdas=lams)
        raise ValueError(f"unknown extension kind {kind!r}")

    def to_json(self) -> dict:
        w = self.w if isinstance(self.w, str) else W.to_text(self.w)
        if self.kind == "root":
            return {"kind": "root", "w": w, "m": self.m,
                    "new_gen": self.new_gens[0] if self.new_gens else "t"}
        return {"kind": "centralizer", "w": w, "k": self.k,
                "new_gens": list(self.new_gens),
                "lambdas": [_lambda_text(x) for x in self.lambdas]}


_PADIC = re.compile(r"^Zp\((-?[0-9]+);([0-9]+)\)$")


def _parse_lambda(s):
    """``Zp(v;k)``, an integer, or a rational ``n/d``."""
    if not isinstance(s, str):
        return s
    s = s.strip()
    m = _PADIC.match(s)
    if m:
        return W.PadicLiteral(int(m.group(1)), int(m.group(2)))
    x = Fraction(s.strip("()"))
    return x.numerator if x.denominator == 1 else x


def _lambda_text(x) -> str:
    if isinstance(x, W.PadicLiteral):
        return f"Zp({x.value};{x.precision})"
    return str(x)


def is_proper_power(letters: Sequence) -> bool:
    """Whether a free-group word is u^k for some k >= 2.

    A word is a proper power exactly when its cyclic reduction is a periodic
    string.
    """
    w = list(W.free_reduce(tuple(letters)))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    L = len(w)
    for k in range(2, L + 1):
        if L % k == 0 and w == w[: L // k] * k:
            return True
    return False


def _check_fresh(base: EmbeddedPresentation, names: Sequence[str]) -> None:
    for g in names:
        if g in base.generators:
            raise ExtensionError(f"generator {g!r} already exists")
        if not g or not (g[0].isalpha() or g[0] == "_"):
            raise ExtensionError(f"bad generator name {g!r}")


def extend_presentation(
    base: EmbeddedPresentation, spec: ExtensionSpec, max_level: int | None = None
) -> EmbeddedPresentation:
    """Adjoin a root of ``w`` or extend the centralizer of ``w``.

    With ``max_level`` set, p-adic exponents are checked to carry enough
    precision for evaluation in every quotient up to that level.
    """
    gens = base.generators
    p = base.p
    w_ast = W.parse(spec.w, gens) if isinstance(spec.w, str) else spec.w
    try:
        w_letters = W.free_reduce(w_ast)
    except ValueError as exc:
        raise ExtensionError(str(exc)) from None
    if not w_letters:
        raise ExtensionError("w must be a nontrivial word")
    if is_proper_power(w_letters):
        raise ExtensionError(
            f"{W.letters_to_text(w_letters)} is a proper power, so it cannot "
            "generate a maximal abelian subgroup"
        )
    rho_w = W.substitute(w_ast, base.rho)
    rels = list(base.presentation.relators)
    rho = dict(base.rho)

    if spec.kind == "root":
        m = spec.m
        if m is None or m < 2:
            raise ExtensionError("root extensions need m >= 2")
        if math.gcd(m, p) != 1:
            raise ExtensionError(f"1/{m} is not a {p}-adic integer (gcd(m, p) != 1)")
        (t,) = spec.new_gens or ("t",)
        _check_fresh(base, [t])
        rels.append(W.free_reduce(((t, 1),) * m + W.free_reduce(W.inverse(w_ast))))
        rho[t] = W.Power(rho_w, Fraction(1, m))
        new = (t,)
    elif spec.kind == "centralizer":
        k = spec.k or 1
        names = spec.new_gens or (("t",) if k == 1 else tuple(f"t{j + 1}" for j in range(k)))
        if len(names) != k:
            raise ExtensionError(f"expected {k} new generator names")
        if len(spec.lambdas) != k:
            raise ExtensionError(f"missing exponents: need {k}, got {len(spec.lambdas)}")
        _check_fresh(base, names)
        for lam in spec.lambdas:
            if isinstance(lam, W.PadicLiteral) and max_level is not None:
                need = 1 + legendre_valuation(max_level - 1, p)
                if lam.precision < need:
                    raise PrecisionExhausted(
                        f"exponent Zp({lam.value};{lam.precision}) is too coarse "
                        f"for level {max_level}",
                        required=need,
                    )
            elif isinstance(lam, Fraction) and lam.denominator % p == 0:
                raise ExtensionError(f"exponent {lam} is not a {p}-adic integer")
        for j, t in enumerate(names):
            rels.append(W.free_reduce(W.Commutator(W.Gen(t), w_ast)))
            for t2 in names[j + 1:]:
                rels.append(W.free_reduce(W.Commutator(W.Gen(t), W.Gen(t2))))
            rho[t] = W.Power(rho_w, spec.lambdas[j])
        new = tuple(names)
    else:
        raise ExtensionError(f"unknown extension kind {spec.kind!r}")

    P = Presentation(gens + new, tuple(rels))
    return EmbeddedPresentation(P, rho, p, base.ambient_rank)


def build_tower(base: EmbeddedPresentation, specs: Sequence[ExtensionSpec],
                max_level: int | None = None) -> list:
    """[H_0, H_1, ...] obtained by applying ``specs`` in turn."""
    stages = [base]
    for spec in specs:
        stages.append(extend_presentation(stages[-1], spec, max_level))
    return stages


def suggest_lambda(p: int, k: int = 40, seed: int = 0, bound: int = 1000) -> W.PadicLiteral:
    """A random p-adic exponent that matches no rational a/b with |a|, b <= bound."""
    rng = random.Random(seed)
    mod = p**k
    while True:
        v = rng.randrange(mod)
        if not _has_short_rational(v, p, k, bound):
            return W.PadicLiteral(v, k)


def _has_short_rational(v: int, p: int, k: int, bound: int) -> bool:
    mod = p**k
    for b in range(1, bound + 1):
        if b % p == 0:
            continue
        a = v * b % mod
        if a > mod // 2:
            a -= mod
        if abs(a) <= bound:
            return True
    return False


# ---------------------------------------------------------------------------
# Amalgam criterion at finite level


@dataclass(frozen=True)
class AmalgamReport:
    level: int
    order: int
    dim_h: int
    dim_b: int
    dim_a: int
    dim_intersection: int
    contained: bool

    @property
    def gap(self) -> int:
        return self.dim_intersection - self.dim_a

    def normalized(self) -> dict:
        q = self.order
        return {
            "h": Fraction(self.dim_h, q),
            "b": Fraction(self.dim_b, q),
            "a": Fraction(self.dim_a, q),
            "intersection": Fraction(self.dim_intersection, q),
        }

    def to_json(self) -> dict:
        return {
            "schema": "v1",
            "n": self.level,
            "order": self.order,
            "dim_h": self.dim_h,
            "dim_b": self.dim_b,
            "dim_a": self.dim_a,
            "dim_intersection": self.dim_intersection,
            "gap": self.gap,
            "contained": self.contained,
            "normalized": {k: str(v) for k, v in self.normalized().items()},
        }


def _ideal_rows(h, words) -> list:
    """Spanning vectors q (g - 1) of the left ideal generated by I_<words>."""
    rows = []
    for w in words:
        t = h.word_table(w)
        for q in range(h.order):
            r = int(t[q])
            if r != q:
                rows.append({r: 1, q: -1})
    return rows


def _subgroup_closure(h, words) -> set:
    """Local indices of the subgroup of the image generated by ``words``."""
    tables = [h.word_table(w) for w in words]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for q in frontier:
            for t in tables:
                r = int(t[q])
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return seen


def amalgam_check(
    G: EmbeddedPresentation,
    h_gens: Sequence,
    b_gens: Sequence,
    a_gens: Sequence,
    level: int,
    cap: int = DEFAULT_CAP,
) -> AmalgamReport:
    """Compare I_H^Q ∩ I_B^Q with I_A^Q inside F_p[Q] for Q = image of G at ``level``."""
    from .foxrank import FpMatrix, rank_fp

    Q = build_quotient(G.p, G.ambient_rank, level, cap=cap)
    h = hom_from_words(G.rho, Q, G.generators, G.presentation.relators)
    ok, bad = check_relators(h)
    if not ok:
        raise RelatorViolation(W.letters_to_text(bad), level)
    def words(ws):
        return [W.parse(w, G.generators) if isinstance(w, str) else w for w in ws]

    hw, bw, aw = words(h_gens), words(b_gens), words(a_gens)
    a_group = _subgroup_closure(h, aw)
    if not (a_group <= _subgroup_closure(h, hw) and a_group <= _subgroup_closure(h, bw)):
        raise ValueError(f"A-generators do not lie in both <H> and <B> at level {level}")

    m, p = h.order, G.p

    def rank(rows):
        return rank_fp(FpMatrix(p, len(rows), m, rows))

    rh, rb, ra = _ideal_rows(h, hw), _ideal_rows(h, bw), _ideal_rows(h, aw)
    dim_h, dim_b, dim_a = rank(rh), rank(rb), rank(ra)
    dim_sum = rank(rh + rb)
    contained = rank(rh + ra) == dim_h and rank(rb + ra) == dim_b
    return AmalgamReport(level, m, dim_h, dim_b, dim_a, dim_h + dim_b - dim_sum, contained)


# ---------------------------------------------------------------------------
# Strong embedding probe


@dataclass(frozen=True)
class ProbeRecord:
    n: int
    index: int
    b: Fraction
    ambient_rank: int
    dense: bool

    @property
    def b_plus_one(self) -> Fraction:
        return self.b + 1

    @property
    def gap(self) -> Fraction:
        return self.b + 1 - self.ambient_rank

    @property
    def expected_gap(self) -> Fraction:
        return Fraction(1, self.index)

    @property
    def consistent(self) -> bool:
        """Dense, and b_n + 1 >= d as a strong embedding requires."""
        return self.dense and self.b + 1 >= self.ambient_rank

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "index": self.index,
            "b_plus_one": str(self.b_plus_one),
            "ambient_rank": self.ambient_rank,
            "dense": self.dense,
            "gap": str(self.gap),
            "expected_gap": str(self.expected_gap),
            "consistent": self.consistent,
        }


def strong_embedding_probe(
    G: EmbeddedPresentation, levels: Sequence[int], cap: int = DEFAULT_CAP
) -> list:
    report = beta1_sequence(G.presentation, G.rho, G.p, levels,
                            ambient_rank=G.ambient_rank, cap=cap)
    return [ProbeRecord(r.n, r.index, r.b, G.ambient_rank, r.dense) for r in report.levels]
