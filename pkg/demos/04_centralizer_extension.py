"""
Extending a centralizer by a p-adic exponent
============================================

The centralizer of a in F(a, b) is extended by a new generator t commuting
with a. In the free pro-p group t is sent to x1^lambda for a p-adic lambda
that is far from any small rational number.
"""

from qmagnus import ExtensionSpec, extend_presentation, free_base, strong_embedding_probe
from qmagnus.errors import PrecisionExhausted
from qmagnus.extcheck import suggest_lambda

p = 3
lam = suggest_lambda(p, k=30, seed=1)
print("lambda =", f"Zp({lam.value};{lam.precision})")

spec = ExtensionSpec("centralizer", "a", k=1, new_gens=("t",), lambdas=(lam,))
G = extend_presentation(free_base(["a", "b"], p), spec, max_level=4)
print("relators:", G.presentation.relator_texts())

for rec in strong_embedding_probe(G, [2, 3, 4]):
    print(f"n = {rec.n}: index {rec.index}, b_n + 1 = {rec.b_plus_one}, gap {rec.gap}")

# an exponent known only modulo p cannot be used at higher levels
coarse = ExtensionSpec.from_json({"kind": "centralizer", "w": "a", "lambdas": ["Zp(2;1)"]})
try:
    extend_presentation(free_base(["a", "b"], p), coarse, max_level=6)
except PrecisionExhausted as exc:
    print("refused:", exc, "| needs precision", exc.required)
