"""
Normalised Betti numbers along the dimension-subgroup chain
===========================================================

The finite quotients Q_n of a free group are enumerated inside the units of
F_p<y1, y2> truncated at degree n. For each level the first homology of the
kernel is computed from the Fox Jacobian pushed to F_p[Q_n].
"""

from qmagnus import Presentation, beta1_sequence, build_quotient
from qmagnus.foxrank import rank_fp

import numpy as np

for p in (2, 3, 5):
    orders = [build_quotient(p, 2, n).order for n in range(2, 5 if p < 5 else 4)]
    print(f"p = {p}: |Q_n| =", orders)

# for the free group b_n = dim H_1 / index equals 1 + 1/|Q_n| exactly
F2 = Presentation(("a", "b"))
rep = beta1_sequence(F2, {"a": "x1", "b": "x2"}, 3, [2, 3, 4])
for rec in rep.levels:
    print(f"n = {rec.n}: index {rec.index:5d}, h1 = {rec.h1:5d}, b_n = {rec.b}")

# Z^2 does not embed densely in a free pro-p group, so it is run on the
# abelian chain instead; the normalised Betti numbers tend to 0
Z2 = Presentation(("a", "b"), ("[a, b]",))
rep = beta1_sequence(Z2, {"a": "x1", "b": "x2"}, 3, [2, 3, 4], commutative=True)
print("Z^2, p = 3:", [str(r.b) for r in rep.levels])

# the rank routine works on plain arrays too
rng = np.random.default_rng(0)
a = rng.integers(0, 3, size=(30, 40))
print("rank of a random 30 x 40 matrix over F_3:", rank_fp(a, 3))
