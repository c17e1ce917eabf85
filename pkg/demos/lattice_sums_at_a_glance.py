"""
Rectangular lattice sums at a glance
====================================

S0(lam, s) sums (p1^2 + lam^2 p2^2)^-s over the integer lattice with the
origin removed. This script evaluates it three ways and checks they agree.
"""

import math

import numpy as np

from latticezeros.latticesum import LatticeShape, direct_sum, factorized_reference, s0, s0_tilde

# Square lattice at s = 3: the fast (Kober) evaluation, the brute-force sum and
# the closed form 4 zeta(s) L_-4(s) should all line up.
s = 3.0
fast = s0(1.0, s)
slow = direct_sum(1.0, s, radius=1000.0)
closed = factorized_reference(LatticeShape.from_c(1), s)
print(f"S0(1, 3)   Kober  {fast.value.real:.15f}  (+- {fast.est_abs_err:.1e}, {fast.terms_used} Bessel terms)")
print(f"           direct {slow.value.real:.15f}  (+- {slow.est_abs_err:.1e})")
print(f"           closed {closed.real:.15f}")

# Every integer c = lam^2 from 1 to 7 has a closed form; check a few complex s.
print("\nclosed forms, relative error at three points")
for c in range(1, 8):
    shape = LatticeShape.from_c(c)
    errs = []
    for z in (complex(0.7, 4.0), complex(1.9, -12.0), complex(0.5, 21.0)):
        v = s0(shape, z).value
        errs.append(abs(v - factorized_reference(shape, z)) / abs(v))
    print(f"  c = {c}: " + "  ".join(f"{e:.1e}" for e in errs))

# The symmetrised sum S0~ is invariant under lam -> 1/lam and s -> 1 - s, and
# real on the critical line.
z = complex(0.3, 9.0)
a = s0_tilde(1.7, z).value
b = s0_tilde(1 / 1.7, 1 - z).value
print(f"\nS0~(1.7, s) - S0~(1/1.7, 1-s) = {abs(a - b):.1e}  (|S0~| = {abs(a):.3e})")

ts = np.linspace(0.0, 30.0, 7)
vals = [s0_tilde(math.sqrt(5), complex(0.5, t)).value for t in ts]
print("on the critical line, lam = sqrt 5:")
for t, v in zip(ts, vals):
    print(f"  t = {t:5.1f}   S0~ = {v.real: .6e}   Im/|S0~| = {abs(v.imag) / abs(v):.1e}")
