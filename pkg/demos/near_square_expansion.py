"""
Expanding around the square lattice
===================================

Near lam = 1, S0~ is a power series in sin(phi) = (lam^2 - 1)/(lam^2 + 1)
whose coefficients are angular lattice sums at lam = 1. Truncating after
sin^8 leaves an error of order sin^10, which we can see directly.
"""

from latticezeros.latticesum import LatticeShape, expansion_eval, s0_tilde, t_plus, t_plus_expansion
from latticezeros.latticesum.expansion import expansion_residual_extended

s = 3.0
print(" lam    sin(phi)     remainder      remainder/sin^10")
for lam in (1.02, 1.05, 1.1, 1.2):
    w = LatticeShape(lam).sin_phi
    r = expansion_residual_extended(lam, s, order=4, radius=300)
    print(f" {lam:4.2f}  {w:.6f}  {float(r): .4e}   {float(r) / w**10:.5f}")

# The truncated series is already a good approximation in double precision.
lam = 1.1
print(f"\nS0~(1.1, 3) = {s0_tilde(lam, s).value.real:.15f}")
print(f"order 4     = {expansion_eval(lam, s, 4).real:.15f}")

# The T+ part of the Kober form has its own sin(phi) series, valid for complex s.
z = complex(0.4, 6.0)
exact = t_plus(lam, z)
for order in (1, 3, 5, 7):
    err = abs(t_plus_expansion(lam, z, order) - exact) / abs(exact)
    print(f"T+ series to sin^{order}: relative error {err:.2e}")
