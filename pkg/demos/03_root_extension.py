"""
Adjoining a cube root of a^2 b^2
================================

G = <a, b, t | t^3 = a^2 b^2> maps into the free pro-p group on x1, x2 by
t -> (x1^2 x2^2)^(1/3) whenever p is not 3. The normalised Betti numbers
sit exactly at the free-group value.
"""

from qmagnus import ExtensionSpec, amalgam_check, extend_presentation, free_base
from qmagnus import strong_embedding_probe, to_text

for p in (2, 5):
    G = extend_presentation(free_base(["a", "b"], p),
                            ExtensionSpec("root", "a^2 b^2", m=3, new_gens=("t",)))
    print(f"p = {p}: relators {G.presentation.relator_texts()}, t -> {to_text(G.rho['t'])}")
    for rec in strong_embedding_probe(G, [2, 3]):
        print(f"  n = {rec.n}: b_n + 1 = {rec.b_plus_one}, gap {rec.gap}, "
              f"consistent = {rec.consistent}")

    # G is the amalgam of <a, b> and <t> over <t^3>; the finite-level
    # augmentation-ideal test sees the inclusion I_A in I_H and I_B
    for n in (2, 3):
        rep = amalgam_check(G, ["a", "b"], ["t"], ["t^3"], n)
        print(f"  amalgam n = {n}: dims H {rep.dim_h}, B {rep.dim_b}, A {rep.dim_a}, "
              f"H and B {rep.dim_intersection}, contained = {rep.contained}")

# m divisible by p is refused: 1/2 is not a 2-adic integer
try:
    extend_presentation(free_base(["a", "b"], 2),
                        ExtensionSpec("root", "a", m=2, new_gens=("t",)))
except ValueError as exc:
    print("refused:", exc)
