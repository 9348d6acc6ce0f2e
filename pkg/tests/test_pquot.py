import random

import numpy as np
import pytest

from qmagnus import wordexpr as W
from qmagnus.errors import CapExceeded
from qmagnus.pquot import (
    build_quotient,
    check_density,
    check_relators,
    hom_from_words,
    projection,
)

IDENTITY = {"a": "x1", "b": "x2"}


def necklaces(j, d):
    total = 0
    for e in range(1, j + 1):
        if j % e == 0:
            total += _mobius(j // e) * d**e
    return total // j


def _mobius(n):
    out, q = 1, 2
    while q * q <= n:
        if n % q == 0:
            n //= q
            if n % q == 0:
                return 0
            out = -out
        q += 1
    return -out if n > 1 else out


def jennings_order(p, d, n):
    """|F / D_n| from the ranks of the mod-p dimension subgroup quotients."""
    exp = 0
    for k in range(1, n):
        j, r = k, 0
        while True:
            r += necklaces(j, d)
            if j % p:
                break
            j //= p
        exp += r
    return p**exp


@pytest.mark.parametrize("p,orders", [(2, [4, 32, 128, 8192]), (3, [9, 27, 2187]), (5, [25, 125])])
def test_quotient_orders(p, orders):
    for n, want in enumerate(orders, start=2):
        assert jennings_order(p, 2, n) == want
        assert build_quotient(p, 2, n).order == want


def test_three_generator_orders():
    for p, n in ((2, 3), (3, 3)):
        assert build_quotient(p, 3, n).order == jennings_order(p, 3, n)


def test_commutative_quotient_is_abelian():
    Q = build_quotient(3, 2, 4, commutative=True)
    # (Z/9)^2 has order 81 and is the image of Z^2 in units of F_3[y1,y2]/deg 4
    assert Q.order == 81
    g, h = Q.generators
    assert Q.mul(g, h) == Q.mul(h, g)


def test_group_axioms_small():
    Q = build_quotient(2, 2, 3)
    rng = random.Random(0)
    for _ in range(50):
        i, j, k = (rng.randrange(Q.order) for _ in range(3))
        assert Q.mul(Q.mul(i, j), k) == Q.mul(i, Q.mul(j, k))
        assert Q.mul(i, Q.inv(i)) == 0


def test_projection_is_a_surjective_homomorphism():
    hi, lo = build_quotient(3, 2, 3), build_quotient(3, 2, 2)
    pr = projection(hi, lo)
    assert set(pr.tolist()) == set(range(lo.order))
    rng = random.Random(1)
    for _ in range(40):
        i, j = rng.randrange(hi.order), rng.randrange(hi.order)
        assert pr[hi.mul(i, j)] == lo.mul(pr[i], pr[j])
    with pytest.raises(ValueError):
        projection(lo, hi)


def test_right_table_is_a_permutation():
    Q = build_quotient(2, 2, 3)
    t = Q.right_table(Q.generators[0])
    assert sorted(t.tolist()) == list(range(Q.order))


def test_identity_hom_is_dense():
    Q = build_quotient(3, 2, 3)
    h = hom_from_words(IDENTITY, Q)
    assert check_density(h)
    assert h.index_in_quotient == 1


def test_non_dense_hom():
    Q = build_quotient(3, 2, 3)
    h = hom_from_words({"a": "x1"}, Q)
    assert not check_density(h)
    # <x1> in Q_3 for p = 3 is cyclic of order 3
    assert h.order == 3


def test_commutator_relator_fails_noncommutatively():
    rels = [W.parse_letters("[a, b]")]
    Q2 = build_quotient(3, 2, 2)
    assert check_relators(hom_from_words(IDENTITY, Q2, relators=rels)) == (True, None)
    Q3 = build_quotient(3, 2, 3)
    ok, bad = check_relators(hom_from_words(IDENTITY, Q3, relators=rels))
    assert not ok and bad == rels[0]
    Qc = build_quotient(3, 2, 4, commutative=True)
    assert check_relators(hom_from_words(IDENTITY, Qc, relators=rels))[0]


def test_root_image_is_an_integer_power():
    Q = build_quotient(3, 2, 4)
    h = hom_from_words(IDENTITY, Q)
    # 1/2 = 122 modulo 3^5, and x1 has order dividing 3^5 here
    assert h.word_image("a^(1/2)") == h.word_image("a^122")
    root = hom_from_words({"t": "x1^(1/2)"}, Q)
    assert root.images[0] == h.word_image("a^122")


def test_word_table_matches_translate():
    Q = build_quotient(2, 2, 3)
    h = hom_from_words(IDENTITY, Q)
    w = "a b^-1 a a"
    assert np.array_equal(h.word_table(w), h.translate(W.parse_letters(w)))
    assert h.letters_image(W.parse_letters(w)) == h.word_image(w)


def test_cap_exceeded():
    with pytest.raises(CapExceeded) as err:
        build_quotient(2, 2, 5, cap=1000)
    assert err.value.partial_size > 1000


def test_bad_parameters():
    with pytest.raises(ValueError):
        build_quotient(4, 2, 3)
    with pytest.raises(ValueError):
        build_quotient(2, 2, 1)


def test_quotient_json():
    out = build_quotient(3, 2, 2).to_json()
    assert out["order"] == 9
    assert len(out["generator_images"]) == 2
