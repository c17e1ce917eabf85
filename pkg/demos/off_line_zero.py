"""
A zero off the critical line
============================

For lam = sqrt 5 the symmetrised sum S0~ has zeros that are not on
Re s = 1/2. Along the line they show up only as a dip of |Z(t)| that never
changes sign; the argument principle and Newton's method find them.
"""

import math

from latticezeros.zeros import Region, count_zeros, refine_zero, scan_critical_line, zero_quadruple

lam = math.sqrt(5)

# Sign changes of Z(t) = S0~(lam, 1/2 + it) are zeros on the line; minima of
# |Z| without a sign change are flagged separately.
scan = scan_critical_line(lam, 10.0, 20.0)
print("on-line zeros:", ", ".join(f"{t:.6f}" for t in scan.t_values))
print("dips without a sign change:", ", ".join(f"{t:.4f}" for t in scan.candidates))

# Count zeros to the right of the line, then polish the one we find.
print("zeros in [0.55, 1] x [15, 16]:", count_zeros(lam, Region(0.55, 1.0, 15.0, 16.0)))
z = refine_zero(lam, complex(0.93, 15.67))
print(f"refined: s = {z.s.real:.12f} + {z.s.imag:.12f}i, |S0~|/scale = {z.residual / z.scale:.1e}, multiplicity {z.multiplicity}")

# Symmetry gives three more zeros for free.
for q in zero_quadruple(z):
    print(f"  {q.s.real:+.10f} {q.s.imag:+.10f}i   residual/scale {q.residual / q.scale:.1e}")
