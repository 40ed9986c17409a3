"""Exact arithmetic in a finite Grassmann algebra.

Walks through the basic moves: anticommuting generators, nilpotent
cancellation, the terminating Neumann series for inverses, and the real
structures with both signs.
"""

from supercurves import GrassmannScalar, RealStructure

n = 3
b1, b2, b3 = (GrassmannScalar.generator(n, i) for i in range(n))
one = GrassmannScalar.one(n)

print("== products and signs ==")
print("b1*b2          =", b1 * b2)
print("b2*b1          =", b2 * b1)
print("b1*b1          =", b1 * b1)
print("(1+b1b2)(1-b1b2) =", (one + b1 * b2) * (one - b1 * b2))

print("\n== inversion by the nilpotent Neumann series ==")
a = GrassmannScalar.scalar(n, 2) - b1 * b2 + b1 * b2 * b3 * 0  # even, body 2
inv = a.invert()
print("a      =", a)
print("a^-1   =", inv)
print("a*a^-1 =", a * inv)
try:
    b1.invert()
except Exception as exc:
    print("inverting an odd element:", type(exc).__name__, "-", exc)

print("\n== body / soul / reduction ==")
mixed = GrassmannScalar.scalar(n, 3 + 1j) + b1 * 2.0 + b2 * b3 * 0.5
print("element =", mixed)
print("body    =", mixed.body)
print("soul    =", mixed.soul())
print("reduce  =", mixed.reduce())

print("\n== real structures (complex antilinear, generators fixed) ==")
for eps in (+1, -1):
    omega = RealStructure(eps)
    x = b1 * b2 * (2 + 1j)
    print(f"eps={eps:+d}: omega((2+i) b1b2) =", x.conjugate(omega),
          " omega^2 = id:", x.conjugate(omega).conjugate(omega) == x)

print("\n== exponentials terminate on the soul ==")
s = b1 * b2 * 0.7 + b2 * b3 * (0.2 - 0.1j)
print("exp(s)         =", s.exp())
print("exp(s)exp(-s)  =", s.exp() * (-s).exp())
