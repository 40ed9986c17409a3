"""The genus-one closed form: Baker matrix, its Berezinian, and the tau function.

Assembles the 2x2 super Baker matrix from Theta_11 quotients at a and
zeta - a, checks that its inverse Berezinian reproduces the tau ratio, and
demonstrates single-valuedness of the closed form on the Jacobian lattice.
"""

from supercurves import GrassmannScalar, SuperEllipticData, baker_matrix, \
    berezinian, tau_closed_form, tau_ratio
from supercurves.elliptic import convention_factor

n = 2
alpha = GrassmannScalar.generator(n, 0)
delta = GrassmannScalar.generator(n, 1)
g = lambda v: GrassmannScalar.scalar(n, v)

d = SuperEllipticData(tau_modulus=2j, delta=delta, a=g(0.31 + 0.17j),
                      alpha=alpha, zeta=g(0.12 - 0.05j), n=n)

print("== the Baker matrix ==")
B = baker_matrix(d)
for row in B.entries:
    print("  ", [str(e) for e in row])
print("convention factor at alpha*delta = 0:", convention_factor(d))

print("\n== superdeterminant identity ==")
print("ber(B)^-1   =", berezinian(B).invert())
print("tau ratio   =", tau_ratio(d))
print("difference  =", (berezinian(B).invert() - tau_ratio(d)).norm_inf())

print("\n== the closed-form tau function ==")
tc = tau_closed_form(d)
print("tau                =", tc)
print("quotient identity  =",
      (tau_closed_form(d, d.a - d.zeta) * tc.invert() - tau_ratio(d)).norm_inf())
print("tau(a+1) - tau(a)  =", (tau_closed_form(d, d.a + 1) - tc).norm_inf())
print("tau(a+tau) - tau(a)=", (tau_closed_form(d, d.a + 2j) - tc).norm_inf())
