"""Finite p-quotients Q_n of a free group.

Q_n is the subgroup of units of F_p<y_1..y_d> / (degree >= n) generated by
the images 1 + y_i. Its kernels form the dimension-subgroup chain, which
has trivial intersection. With ``commutative=True`` the target ring is the
commutative truncated polynomial ring instead, which gives the analogous
chain for a free abelian pro-p group.
"""

from __future__ import annotations

from collections import deque
from typing import Mapping, Sequence

import numpy as np

from .errors import CapExceeded
from .magnus import MagnusContext, evaluate
from .scalars import GF, is_prime
from .series import SeriesRing, TruncatedSeries
from . import wordexpr as W

__all__ = [
    "DEFAULT_CAP",
    "FiniteQuotient",
    "QuotientHom",
    "build_quotient",
    "hom_from_words",
    "check_density",
    "check_relators",
    "projection",
]

DEFAULT_CAP = 10**6


class FiniteQuotient:
    """An enumerated finite p-group of truncated series.

    Elements are numbered in BFS order from the identity (index 0).
    """

    def __init__(self, p: int, d: int, n: int, elements: list, commutative: bool):
        self.p = p
        self.d = d
        self.n = n
        self.commutative = commutative
        self.ring = SeriesRing(d, n, GF(p))
        self.elements = elements
        self.index = {s.key(): i for i, s in enumerate(elements)}
        self.generators = [self.lookup(self.ring.generator(i)) for i in range(d)]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def canon(self, s: TruncatedSeries) -> TruncatedSeries:
        return s.abelianize() if self.commutative else s

    def lookup(self, s: TruncatedSeries) -> int:
        try:
            return self.index[self.canon(s).key()]
        except KeyError:
            raise KeyError(f"{s!r} is not an element of this quotient") from None

    def mul(self, i: int, j: int) -> int:
        return self.lookup(self.elements[i] * self.elements[j])

    def inv(self, i: int) -> int:
        return self.lookup(self.elements[i].invert_unit())

    def right_table(self, g: int, subset: Sequence[int] | None = None) -> np.ndarray:
        """Array t with t[q] = index of element q times element g."""
        gs = self.elements[g]
        idx = range(self.order) if subset is None else subset
        return np.fromiter(
            (self.lookup(self.elements[q] * gs) for q in idx), dtype=np.int64
        )

    def to_json(self) -> dict:
        return {
            "schema": "v1",
            "p": self.p,
            "d": self.d,
            "n": self.n,
            "commutative": self.commutative,
            "order": self.order,
            "generator_images": [
                self.elements[g].to_json() for g in self.generators
            ],
        }


def build_quotient(
    p: int, d: int, n: int, cap: int = DEFAULT_CAP, commutative: bool = False
) -> FiniteQuotient:
    """Enumerate Q_n by breadth-first closure of {1+y_i, (1+y_i)^-1}."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 2:
        raise ValueError("level n must be >= 2")
    ring = SeriesRing(d, n, GF(p))
    gens = [ring.generator(i) for i in range(d)]
    gens += [g.invert_unit() for g in gens]
    if commutative:
        gens = [g.abelianize() for g in gens]
    one = ring.one()
    elements = [one]
    seen = {one.key()}
    queue = deque([one])
    while queue:
        q = queue.popleft()
        for g in gens:
            r = q * g
            if commutative:
                r = r.abelianize()
            key = r.key()
            if key in seen:
                continue
            seen.add(key)
            elements.append(r)
            if len(elements) > cap:
                raise CapExceeded(
                    f"quotient p={p} d={d} n={n} exceeds cap {cap}",
                    partial_size=len(elements),
                )
            queue.append(r)
    return FiniteQuotient(p, d, n, elements, commutative)


def projection(Q_hi: FiniteQuotient, Q_lo: FiniteQuotient) -> np.ndarray:
    """The truncation map Q_hi -> Q_lo as an index array."""
    if (Q_hi.p, Q_hi.d, Q_hi.commutative) != (Q_lo.p, Q_lo.d, Q_lo.commutative):
        raise ValueError("quotients belong to different families")
    if Q_lo.n > Q_hi.n:
        raise ValueError("can only project to a lower level")
    return np.fromiter(
        (Q_lo.lookup(s.truncate(Q_lo.n)) for s in Q_hi.elements), dtype=np.int64
    )


def _as_word(w, names=None):
    return W.parse(w, names) if isinstance(w, str) else w


class QuotientHom:
    """A homomorphism from a group on ``generators`` into a FiniteQuotient.

    ``image`` lists the Q-indices of the image subgroup in BFS order; its
    position in that list is the *local* index used by the regular
    representation. ``tables[(name, e)]`` maps local q to local q * g^e.
    """

    def __init__(self, Q: FiniteQuotient, generators: Sequence[str], rho: Mapping,
                 images: list, relators: Sequence = ()):
        self.quotient = Q
        self.generators = tuple(generators)
        self.rho = dict(rho)
        self.images = images
        self.relators = tuple(relators)
        self._close()

    def _close(self):
        Q = self.quotient
        gens = []
        for name, g in zip(self.generators, self.images):
            gens.append(((name, 1), g))
            gens.append(((name, -1), Q.inv(g)))
        image = [0]
        local = {0: 0}
        queue = deque([0])
        edges: dict = {key: {} for key, _ in gens}
        while queue:
            q = queue.popleft()
            for key, g in gens:
                r = Q.mul(q, g)
                if r not in local:
                    local[r] = len(image)
                    image.append(r)
                    queue.append(r)
                edges[key][local[q]] = local[r]
        self.image = image
        self.local = local
        m = len(image)
        self.tables = {
            key: np.fromiter((e[q] for q in range(m)), dtype=np.int64, count=m)
            for key, e in edges.items()
        }

    @property
    def order(self) -> int:
        """|image| = |G : G_n|."""
        return len(self.image)

    @property
    def index_in_quotient(self) -> int:
        return self.quotient.order // self.order

    def translate(self, letters: Sequence) -> np.ndarray:
        """Local-index array of q * w for every image element q."""
        arr = np.arange(self.order, dtype=np.int64)
        for letter in letters:
            arr = self.tables[letter][arr]
        return arr

    def letters_image(self, letters: Sequence) -> int:
        """Q-index of the image of an integer word."""
        q = 0
        for letter in letters:
            q = int(self.tables[letter][q])
        return self.image[q]

    def word_image(self, w) -> int:
        """Q-index of the image of any word in the source generators."""
        w = _as_word(w, self.generators)
        if W.is_integral(w):
            return self.letters_image(W.free_reduce(w))
        Q = self.quotient
        ctx = MagnusContext(Q.d, Q.n, GF(Q.p))
        return Q.lookup(evaluate(W.substitute(w, self.rho), ctx))

    def word_table(self, w) -> np.ndarray:
        """Local-index array of q * w over the image."""
        w = _as_word(w, self.generators)
        if W.is_integral(w):
            return self.translate(W.free_reduce(w))
        g = self.word_image(w)
        t = self.quotient.right_table(g, self.image)
        return np.fromiter((self.local[int(x)] for x in t), dtype=np.int64)

    def to_json(self) -> dict:
        Q = self.quotient
        return {
            "schema": "v1",
            "p": Q.p,
            "d": Q.d,
            "n": Q.n,
            "order": Q.order,
            "image_order": self.order,
            "index": self.index_in_quotient,
            "dense": check_density(self),
        }


def hom_from_words(
    rho: Mapping, Q: FiniteQuotient, generators: Sequence[str] | None = None,
    relators: Sequence = (),
) -> QuotientHom:
    """Evaluate generator images ``rho`` (words in x1..xd) inside Q."""
    if generators is None:
        generators = list(rho)
    names = tuple(f"x{i + 1}" for i in range(Q.d))
    ctx = MagnusContext(Q.d, Q.n, GF(Q.p), names)
    words = {}
    images = []
    for g in generators:
        w = _as_word(rho[g], names)
        words[g] = w
        images.append(Q.lookup(evaluate(w, ctx)))
    return QuotientHom(Q, generators, words, images, relators)


def check_density(h: QuotientHom) -> bool:
    return h.order == h.quotient.order


def check_relators(h: QuotientHom, relators: Sequence | None = None):
    """``(True, None)`` if every relator dies in Q, else ``(False, relator)``."""
    rels = h.relators if relators is None else relators
    for r in rels:
        if isinstance(r, tuple):
            q = h.letters_image(r)
        else:
            q = h.word_image(r)
        if q != 0:
            return False, r
    return True, None
