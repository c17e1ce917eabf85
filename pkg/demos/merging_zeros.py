"""
Following the off-line zero as the lattice stretches
====================================================

Track the lam = sqrt 5 off-line zero as c = lam^2 moves down towards 4 and
up towards 6.3. In both directions the zero walks back to the critical line
and meets a partner there, forming a double zero. Bisection pins down the
value of c where that happens.
"""

from latticezeros.trajectory import find_transition, merge_signature, trace, transition_point
from latticezeros.zeros import refine_zero

start = refine_zero(5 ** 0.5, complex(0.93, 15.67)).s

for c_end in (4.0, 7.0):
    tr = trace(5.0, start, c_end)
    fin = tr.final
    print(f"c 5 -> {c_end}: {tr.termination.value} after {len(tr.points)} points")
    for p in tr.points[:: max(1, len(tr.points) // 6)]:
        print(f"    c = {p.c:.6f}   s = {p.s.real:.6f} + {p.s.imag:.6f}i")
    print(f"    end c = {fin.c:.10f}   s = {fin.s.real:.8f} + {fin.s.imag:.8f}i")

# Bisection on the shape of Z(t): one dip (off-line pair) or two sign changes
# (on-line pair). Then check the square-root law of the separation.
for lo, hi, t in ((4.0, 4.001, 16.36), (6.34, 6.35, 14.9387)):
    br = find_transition(lo, hi, t, 0.1)
    c, s = transition_point(br)
    sig = merge_signature(c, s)
    print(
        f"transition in [{br.c_lo:.11f}, {br.c_hi:.11f}]  {br.classification_lo.value} -> {br.classification_hi.value}"
        f"  t* = {s.imag:.7f}  winding {sig.winding}  beta {sig.beta:.4f}"
    )
