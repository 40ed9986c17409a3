"""Berezinians, quasideterminants, and the super Cramer's rule.

Builds small even supermatrices over a 4-generator algebra, checks the
multiplicativity and reciprocity of ber/ber*, relates quasideterminants to
Berezinian quotients, and solves x A = y three independent ways.
"""

import numpy as np

from supercurves import (
    GrassmannScalar,
    SuperLinearSystem,
    SuperMatrix,
    berezinian,
    berezinian_star,
    oracle_solve,
    quasideterminant,
    solve_cramer,
    solve_via_inverse,
)
from supercurves.supermatrix import random_even_matrix, random_vector

n = 4
rng = np.random.default_rng(11)
g = lambda v: GrassmannScalar.scalar(n, v)

print("== the (1|1) worked example ==")
b1 = GrassmannScalar.generator(n, 0)
b2 = GrassmannScalar.generator(n, 1)
A = SuperMatrix((1, 1), (1, 1), [[g(1), b1], [b2, g(1)]])
print("ber  [[1, b1],[b2, 1]] =", berezinian(A))
print("ber* [[1, b1],[b2, 1]] =", berezinian_star(A))
print("ber * ber*             =", berezinian(A) * berezinian_star(A))

print("\n== multiplicativity on a random (2|2) pair ==")
X = random_even_matrix(rng, (2, 2), n)
Y = random_even_matrix(rng, (2, 2), n)
err = (berezinian(X @ Y) - berezinian(X) * berezinian(Y)).norm_inf()
print("|ber(XY) - ber(X)ber(Y)| =", err)

print("\n== quasideterminants are signed Berezinian quotients ==")
q = quasideterminant(X, 0, 0)
print("|X|_00 ber(X^{00}) - ber(X):",
      (q * berezinian(X.delete(0, 0)) - berezinian(X)).norm_inf())
q_odd = quasideterminant(X, 3, 3)
print("odd branch via ber*:",
      (q_odd * berezinian_star(X.delete(3, 3)) - berezinian_star(X)).norm_inf())

print("\n== super Cramer vs oracle vs y A^-1 ==")
y = random_vector(rng, 4, n)
system = SuperLinearSystem(X, y)
xc = solve_cramer(system)
xo = oracle_solve(system)
xi = solve_via_inverse(system)
print("cramer vs oracle :", max((a - b).norm_inf() for a, b in zip(xc, xo)))
print("cramer vs inverse:", max((a - b).norm_inf() for a, b in zip(xc, xi)))
print("x_0 =", xc[0])
