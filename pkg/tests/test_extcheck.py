from fractions import Fraction
import json

import numpy as np
import pytest

import oracles
from qmagnus import wordexpr as W
from qmagnus.errors import ExtensionError, PrecisionExhausted, RelatorViolation
from qmagnus.extcheck import (
    EmbeddedPresentation,
    ExtensionSpec,
    amalgam_check,
    build_tower,
    extend_presentation,
    free_base,
    is_proper_power,
    strong_embedding_probe,
    suggest_lambda,
)
from qmagnus.foxrank import Presentation, beta1_sequence
from qmagnus.pquot import build_quotient, check_density, check_relators, hom_from_words


def root(w, m, gen="t"):
    return ExtensionSpec("root", w, m=m, new_gens=(gen,))


def flagship(p):
    return extend_presentation(free_base(["a", "b"], p), root("a^2 b^2", 3))


def test_square_root_of_a_basis_element():
    G = extend_presentation(free_base(["a", "b"], 3), root("a", 2))
    assert G.presentation.relator_texts() == ["t t a^-1"]
    assert W.to_text(G.rho["t"]) == "x1^(1/2)"
    # Tietze: G is free on t, b, so every level is dense with b_n = 1 + 1/|Q_n|
    for rec in beta1_sequence(G.presentation, G.rho, 3, [2, 3]).levels:
        assert rec.dense
        assert rec.b == 1 + Fraction(1, rec.order)


def test_flagship_construction():
    G = flagship(2)
    assert G.generators == ("a", "b", "t")
    assert G.presentation.relator_texts() == ["t t t b^-1 b^-1 a^-1 a^-1"]
    assert W.to_text(G.rho["t"]) == "(x1^2 x2^2)^(1/3)"


def test_centralizer_construction():
    lam = W.PadicLiteral(41, 20)
    spec = ExtensionSpec("centralizer", "a", k=1, new_gens=("t",), lambdas=(lam,))
    G = extend_presentation(free_base(["a", "b"], 3), spec)
    assert G.presentation.relator_texts() == ["t a t^-1 a^-1"]
    assert G.rho["t"] == W.Power(W.Gen("x1"), lam)
    Q = build_quotient(3, 2, 3)
    h = hom_from_words(G.rho, Q, G.generators, G.presentation.relators)
    assert check_relators(h) == (True, None)


def test_two_new_centralizer_generators_commute():
    spec = ExtensionSpec.from_json({"kind": "centralizer", "w": "a b", "k": 2,
                                    "lambdas": ["Zp(5;12)", "Zp(7;12)"]})
    G = extend_presentation(free_base(["a", "b"], 2), spec)
    assert G.generators[-2:] == ("t1", "t2")
    assert len(G.presentation.relators) == 3
    h = hom_from_words(G.rho, build_quotient(2, 2, 4), G.generators, G.presentation.relators)
    assert check_relators(h)[0]


def test_extension_errors():
    base = free_base(["a", "b"], 3)
    with pytest.raises(ExtensionError):
        extend_presentation(base, root("a", 3))
    with pytest.raises(ExtensionError):
        extend_presentation(base, root("a a", 2))
    with pytest.raises(ExtensionError):
        extend_presentation(base, root("a", 2, gen="b"))
    with pytest.raises(ExtensionError):
        extend_presentation(base, ExtensionSpec("centralizer", "a", k=1, lambdas=()))
    coarse = ExtensionSpec("centralizer", "a", k=1, lambdas=(W.PadicLiteral(4, 1),))
    with pytest.raises(PrecisionExhausted):
        extend_presentation(base, coarse, max_level=5)


def test_proper_powers():
    assert is_proper_power(W.parse_letters("a b a b"))
    assert is_proper_power(W.parse_letters("b^-1 a a b"))
    assert not is_proper_power(W.parse_letters("a^2 b^2"))
    assert not is_proper_power(W.parse_letters("a"))
    assert not is_proper_power(W.parse_letters("[a, b]"))


def test_tower_of_roots():
    specs = [root("a^2 b^2", 3), root("t a", 5, gen="s")]
    tower = build_tower(free_base(["a", "b"], 2), specs)
    assert [len(G.generators) for G in tower] == [2, 3, 4]
    top = tower[-1]
    for rec in strong_embedding_probe(top, [2, 3]):
        assert rec.consistent


def test_json_round_trip(tmp_path):
    G = flagship(5)
    path = tmp_path / "g.json"
    path.write_text(json.dumps(G.to_json()))
    again = EmbeddedPresentation.load(path)
    assert again.to_json() == G.to_json()
    spec = ExtensionSpec.from_json({"kind": "centralizer", "w": "a", "k": 1,
                                    "lambdas": ["Zp(41;20)"]})
    assert ExtensionSpec.from_json(spec.to_json()) == spec


def test_suggested_lambda_is_not_a_small_rational():
    lam = suggest_lambda(3, k=30, seed=2, bound=200)
    mod = 3**30
    for b in range(1, 201):
        if b % 3:
            a = lam.value * b % mod
            assert min(a, mod - a) > 200


def coset_oracle(h, words, G):
    """dim of the kernel of F_p[Q] -> F_p[Q / S] computed from scratch."""
    Q = h.quotient
    elems = h.image
    gens = [h.word_image(W.parse(w, G.generators)) for w in words]
    S = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                r = Q.mul(s, g)
                if r not in S:
                    S.add(r)
                    nxt.append(r)
        frontier = nxt
    cosets = {}
    for q in elems:
        cosets.setdefault(frozenset(Q.mul(q, s) for s in S), len(cosets))
    pos = {q: i for i, q in enumerate(elems)}
    proj = np.zeros((len(cosets), len(elems)), dtype=np.int64)
    for coset, c in cosets.items():
        for q in coset:
            proj[c, pos[q]] = 1
    return proj


@pytest.mark.parametrize("level", [2, 3])
def test_flagship_amalgam(level):
    G = flagship(2)
    rep = amalgam_check(G, ["a", "b"], ["t"], ["t^3"], level)
    assert rep.contained
    assert rep.gap >= 0
    Q = build_quotient(2, 2, level)
    h = hom_from_words(G.rho, Q, G.generators, G.presentation.relators)
    ph = coset_oracle(h, ["a", "b"], G)
    pb = coset_oracle(h, ["t"], G)
    pa = coset_oracle(h, ["t^3"], G)
    m = h.order
    assert rep.dim_h == m - oracles.dense_rank(ph, 2)
    assert rep.dim_b == m - oracles.dense_rank(pb, 2)
    assert rep.dim_a == m - oracles.dense_rank(pa, 2)
    assert rep.dim_intersection == m - oracles.dense_rank(np.vstack([ph, pb]), 2)


def test_amalgam_trivial_cases():
    G = flagship(5)
    same = amalgam_check(G, ["a b"], ["a b"], ["a b"], 2)
    assert same.gap == 0 and same.contained
    empty = amalgam_check(G, ["a"], ["t"], [], 2)
    assert empty.dim_a == 0 and empty.contained


def test_amalgam_rejects_foreign_a():
    with pytest.raises(ValueError):
        amalgam_check(flagship(5), ["a"], ["b"], ["t"], 2)


def test_probe_free_group():
    for rec in strong_embedding_probe(free_base(["a", "b"], 3), [2, 3]):
        assert rec.b_plus_one == 2 + Fraction(1, rec.index)
        assert rec.gap == rec.expected_gap
        assert rec.consistent


def test_probe_flags_non_dense_abelian_group():
    lam = suggest_lambda(3, k=20)
    P = Presentation(("a", "b"), ("[a, b]",))
    G = EmbeddedPresentation(P, {"a": "x1", "b": W.Power(W.Gen("x1"), lam)}, 3, 2)
    recs = strong_embedding_probe(G, [2, 3])
    assert all(not r.dense and not r.consistent for r in recs)
    assert all(r.b_plus_one < 2 for r in recs)


def test_probe_propagates_relator_violation():
    P = Presentation(("a", "b"), ("[a, b]",))
    G = EmbeddedPresentation(P, {"a": "x1", "b": "x2"}, 3, 2)
    with pytest.raises(RelatorViolation):
        strong_embedding_probe(G, [2, 3])
