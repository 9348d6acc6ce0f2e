"""
Telling words apart with truncated Magnus expansions
=====================================================

Every word in x1, x2 (with rational exponents allowed) maps to a unit of a
truncated power series ring. A nonzero term below the truncation proves the
word is not the identity.
"""

from fractions import Fraction

from qmagnus import MagnusContext, certify_nontrivial, evaluate, nilpotence_witness
from qmagnus.scalars import GF

# the commutator [x1, x2] differs from 1 in degree 2
ctx = MagnusContext(d=2, N=3)
print("[x1, x2]           ->", evaluate("[x1, x2]", ctx))

# square roots exist in the series ring: (1 + y1)^(1/2)
print("x1^(1/2), N = 4    ->", evaluate("x1^(1/2)", MagnusContext(1, 4)))

# a certificate records the degree and the leading homogeneous component
cert = certify_nontrivial("[x1^(1/2), x2]")
print("certificate degree:", cert.degree)
print("leading component: ", cert.component)
print(nilpotence_witness(cert).description)

# a word that is trivial never gets a certificate
res = certify_nontrivial("(x1^(1/3))^3 x1^-1")
print("trivial word       ->", type(res).__name__, "up to degree", res.max_degree)

# over F_2 the sign in the commutator disappears
print("[x1, x2] over F_2  ->", certify_nontrivial("[x1, x2]", domain=GF(2)).component)

# higher commutators are detected in higher degree
w = "x2"
for n in range(2, 6):
    w = f"[{w}, x1]"
    print(f"degree of {w:<28}", certify_nontrivial(w).degree)

# exponent laws hold exactly
a, b = Fraction(2, 3), Fraction(-5, 7)
s = evaluate("x1 x2", MagnusContext(2, 6))
print("(1+f)^a (1+f)^b == (1+f)^(a+b):",
      s.binomial_power(a) * s.binomial_power(b) == s.binomial_power(a + b))
